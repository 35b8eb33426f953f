//! Gradient flow to the minimal vector in a complexified group orbit,
//! generalized concurrence, and the stability taxonomy.
//!
//! The flow iterates `psi <- exp(-eta * Σ_i <X_i> X_i) psi`, the steepest
//! descent for the squared norm along the non-compact directions. Its fixed
//! points are exactly the states with vanishing expectation vector, i.e. the
//! completely entangled states, and the limiting squared norm is the
//! generalized concurrence.

use crate::fluct;
use crate::repn::OperatorBasis;
use crate::states::PureState;
use crate::{C64, CMatrix, Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct FlowParams {
    /// Initial step size, reset at every accepted iteration.
    pub step: f64,
    pub max_iters: usize,
    /// Convergence threshold on the gradient norm `sqrt(Σ <X_i>²)`.
    pub grad_tol: f64,
    /// Squared-norm threshold below which the state is on the null cone.
    pub null_tol: f64,
    /// Step shrink factor for backtracking, in (0,1).
    pub backtracking: f64,
}

impl Default for FlowParams {
    fn default() -> Self {
        FlowParams {
            step: 0.5,
            max_iters: 10_000,
            grad_tol: 1e-9,
            null_tol: 1e-6,
            backtracking: 0.5,
        }
    }
}

impl FlowParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.grad_tol > 0.0 && self.max_iters > 0) {
            return Err(Error::InvalidInput("flow parameters must be positive".into()));
        }
        if !(self.null_tol > 0.0 && self.null_tol < 1.0) {
            return Err(Error::InvalidInput("null_tol must lie in (0,1)".into()));
        }
        if !(self.backtracking > 0.0 && self.backtracking < 1.0) {
            return Err(Error::InvalidInput("backtracking ratio must lie in (0,1)".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Coherent,
    Unstable,
    /// Budget exhausted with a shrinking norm bounded away from the null
    /// cone; a diagnostic label, not a verdict.
    SemistableBoundary,
    Stable,
}

impl Stability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stability::Coherent => "coherent",
            Stability::Unstable => "unstable",
            Stability::SemistableBoundary => "semistable_boundary",
            Stability::Stable => "stable",
        }
    }
}

#[derive(Debug, Clone)]
pub struct OrbitResult {
    /// Limiting vector of the flow; unnormalized in general.
    pub minimal_vector: PureState,
    /// Squared norm of the minimal vector, in [0,1] for a normalized start.
    pub concurrence: f64,
    pub stability: Stability,
    pub iterations: usize,
    pub final_gradient_norm: f64,
    /// Squared norms after each accepted step, starting with the input norm.
    pub norm_history: Vec<f64>,
}

/// `exp(scale * m)` for Hermitian `m`, by spectral decomposition.
pub fn hermitian_exp(m: &CMatrix, scale: C64) -> CMatrix {
    let eig = m.clone().symmetric_eigen();
    let d = m.nrows();
    let mut out = CMatrix::zeros(d, d);
    for k in 0..d {
        let col = eig.eigenvectors.column(k);
        let w = (scale * C64::new(eig.eigenvalues[k], 0.0)).exp();
        for i in 0..d {
            for j in 0..d {
                out[(i, j)] += w * col[i] * col[j].conj();
            }
        }
    }
    out
}

fn gradient(amp: &crate::CVector, basis: &OperatorBasis) -> (Vec<f64>, f64) {
    let norm_sq = amp.norm_squared();
    let coeffs: Vec<f64> = basis
        .generators
        .iter()
        .map(|x| amp.dotc(&(x * amp)).re / norm_sq)
        .collect();
    let g = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    (coeffs, g)
}

/// Steepest-descent flow for the norm over the complexified orbit.
pub fn kempf_ness_flow(
    state: &PureState,
    basis: &OperatorBasis,
    params: &FlowParams,
) -> Result<OrbitResult> {
    params.validate()?;
    if state.dim() != basis.dim {
        return Err(Error::DimensionMismatch(format!(
            "state dimension {} != basis dimension {}",
            state.dim(),
            basis.dim
        )));
    }
    let coherent = fluct::coherence_residual(state, basis)? < fluct::COHERENT_TOL;

    let mut amp = state.amplitudes().clone();
    let mut norm_sq = amp.norm_squared();
    let mut history = vec![norm_sq];
    let mut iterations = 0usize;
    let (mut coeffs, mut grad_norm) = gradient(&amp, basis);

    while iterations < params.max_iters {
        if grad_norm <= params.grad_tol || norm_sq < params.null_tol {
            break;
        }
        let dim = basis.dim;
        let mut direction = CMatrix::zeros(dim, dim);
        for (c, x) in coeffs.iter().zip(&basis.generators) {
            direction += x.scale(*c);
        }
        // Backtracking line search; accepting non-strict decrease avoids a
        // stall when the per-step decrease falls below machine precision.
        let mut eta = params.step;
        loop {
            let candidate = &hermitian_exp(&direction, C64::new(-eta, 0.0)) * &amp;
            let cand_sq = candidate.norm_squared();
            if !cand_sq.is_finite() {
                return Err(Error::NonFinite { iteration: iterations });
            }
            if cand_sq <= norm_sq {
                amp = candidate;
                norm_sq = cand_sq;
                break;
            }
            eta *= params.backtracking;
            if eta < 1e-18 {
                // No descent direction left at machine precision.
                grad_norm = 0.0;
                break;
            }
        }
        iterations += 1;
        history.push(norm_sq);
        if grad_norm == 0.0 {
            break;
        }
        let (c, g) = gradient(&amp, basis);
        coeffs = c;
        grad_norm = g;
    }

    let stability = if coherent {
        Stability::Coherent
    } else if norm_sq < params.null_tol {
        Stability::Unstable
    } else if grad_norm <= params.grad_tol {
        Stability::Stable
    } else {
        Stability::SemistableBoundary
    };
    Ok(OrbitResult {
        minimal_vector: PureState::new_unnormalized(state.dims().to_vec(), amp)?,
        concurrence: norm_sq.clamp(0.0, 1.0),
        stability,
        iterations,
        final_gradient_norm: grad_norm,
        norm_history: history,
    })
}

/// Generalized concurrence `μ(ψ) = inf over the complexified orbit of |gψ|²`.
pub fn concurrence(state: &PureState, basis: &OperatorBasis, params: &FlowParams) -> Result<f64> {
    let result = kempf_ness_flow(state, basis, params)?;
    Ok(match result.stability {
        Stability::Unstable | Stability::Coherent => 0.0,
        _ => result.concurrence,
    })
}

/// Stability label of the state under the complexified group action.
pub fn classify(state: &PureState, basis: &OperatorBasis, params: &FlowParams) -> Result<Stability> {
    Ok(kempf_ness_flow(state, basis, params)?.stability)
}
