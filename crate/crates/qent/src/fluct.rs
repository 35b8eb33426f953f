//! Quantum-fluctuation functionals: total variance, expectation vector,
//! entanglement-equation residual, and the coherence tests.

use crate::repn::{casimir, spin_generators, OperatorBasis, SpinLabel};
use crate::states::PureState;
use crate::{C64, Error, Result};

/// Residual below this is decided coherent.
pub const COHERENT_TOL: f64 = 1e-8;
/// Residual above this is decided not coherent; in between is indeterminate.
pub const NOT_COHERENT_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct VarianceReport {
    /// Total variance `D(psi) = Σ <X_i²> - <X_i>²`.
    pub total_variance: f64,
    /// `<X_i>` per generator.
    pub expectation_vector: Vec<f64>,
    /// `<psi| Σ X_i² |psi>`; the Casimir scalar on irreducible systems.
    pub casimir_scalar: f64,
    /// `sqrt(Σ <X_i>²)`, the entanglement-equation residual.
    pub residual_entanglement: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoherenceVerdict {
    Coherent,
    Indeterminate,
    NotCoherent,
}

pub fn coherence_verdict(residual: f64) -> CoherenceVerdict {
    if residual < COHERENT_TOL {
        CoherenceVerdict::Coherent
    } else if residual > NOT_COHERENT_TOL {
        CoherenceVerdict::NotCoherent
    } else {
        CoherenceVerdict::Indeterminate
    }
}

fn check_dims(state: &PureState, basis: &OperatorBasis) -> Result<()> {
    if state.dim() != basis.dim {
        return Err(Error::DimensionMismatch(format!(
            "state dimension {} != basis dimension {}",
            state.dim(),
            basis.dim
        )));
    }
    Ok(())
}

/// Expectation values `<psi|X_i|psi>` for every generator.
pub fn expectations(state: &PureState, basis: &OperatorBasis) -> Result<Vec<f64>> {
    check_dims(state, basis)?;
    let amp = state.amplitudes();
    Ok(basis
        .generators
        .iter()
        .map(|x| amp.dotc(&(x * amp)).re)
        .collect())
}

/// Total variance of the state over the basis of essential observables.
pub fn total_variance(state: &PureState, basis: &OperatorBasis) -> Result<VarianceReport> {
    check_dims(state, basis)?;
    let amp = state.amplitudes();
    let c = casimir(basis);
    let casimir_scalar = amp.dotc(&(&c * amp)).re;
    let expectation_vector = expectations(state, basis)?;
    let sq: f64 = expectation_vector.iter().map(|e| e * e).sum();
    Ok(VarianceReport {
        total_variance: casimir_scalar - sq,
        expectation_vector,
        casimir_scalar,
        residual_entanglement: sq.sqrt(),
    })
}

/// `sqrt(Σ <X_i>²)`; zero exactly on completely entangled states.
pub fn entanglement_residual(state: &PureState, basis: &OperatorBasis) -> Result<f64> {
    let e = expectations(state, basis)?;
    Ok(e.iter().map(|v| v * v).sum::<f64>().sqrt())
}

/// Residual of the quadratic coherence equations:
/// `|| Σ_i X_i psi ⊗ X_i psi - c psi ⊗ psi ||` with `c = Σ <X_i>²`.
///
/// Vanishes on coherent states. The constant is the empirical `Σ <X_i>²`
/// rather than a highest-weight norm, which agrees on coherent states.
pub fn coherence_residual(state: &PureState, basis: &OperatorBasis) -> Result<f64> {
    check_dims(state, basis)?;
    let amp = state.amplitudes();
    let d = basis.dim;
    let c: f64 = expectations(state, basis)?.iter().map(|e| e * e).sum();

    let mut tensor = nalgebra::DVector::<C64>::zeros(d * d);
    for x in &basis.generators {
        let xa = x * amp;
        for i in 0..d {
            if xa[i] == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..d {
                tensor[i * d + j] += xa[i] * xa[j];
            }
        }
    }
    for i in 0..d {
        for j in 0..d {
            tensor[i * d + j] -= C64::new(c, 0.0) * amp[i] * amp[j];
        }
    }
    Ok(tensor.norm())
}

/// Exact coherence test for spin systems: `Σ_a <J_a>² = s²` characterizes
/// coherent states (equivalently, the total variance attains its minimum s).
pub fn spin_coherence_check(state: &PureState, two_s: usize) -> Result<bool> {
    let basis = spin_generators(SpinLabel::new(two_s));
    check_dims(state, &basis)?;
    let sq: f64 = expectations(state, &basis)?.iter().map(|e| e * e).sum();
    let s = two_s as f64 / 2.0;
    Ok((sq - s * s).abs() <= 1e-8)
}
