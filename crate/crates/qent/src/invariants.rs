//! Closed-form polynomial invariants: bipartite determinant concurrence,
//! the Cayley hyperdeterminant for three qubits, and the 3-tangle.

use crate::states::PureState;
use crate::{C64, Error, Result};

#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub name: String,
    pub value: C64,
    pub modulus: f64,
    pub derived_concurrence: f64,
    /// Set when the format admits no invariants (unequal bipartite factors);
    /// the report then carries zeros rather than an error.
    pub degenerate_format: bool,
}

/// Determinant invariant of a bipartite state with equal factor dimensions,
/// `μ = n |det|^{2/n}`. Unequal dimensions admit no invariants at all; that
/// case is reported as zero with a flag.
pub fn det_concurrence(state: &PureState) -> Result<InvariantReport> {
    let dims = state.dims();
    if dims.len() != 2 {
        return Err(Error::InvalidInput(format!(
            "determinant invariant needs exactly two factors, got {}",
            dims.len()
        )));
    }
    if dims[0] != dims[1] {
        return Ok(InvariantReport {
            name: "det".into(),
            value: C64::new(0.0, 0.0),
            modulus: 0.0,
            derived_concurrence: 0.0,
            degenerate_format: true,
        });
    }
    let n = dims[0];
    let amp = state.amplitudes();
    let mut m = crate::CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = amp[i * n + j];
        }
    }
    let value = m.determinant();
    let modulus = value.norm();
    Ok(InvariantReport {
        name: "det".into(),
        value,
        modulus,
        derived_concurrence: (n as f64) * modulus.powf(2.0 / n as f64),
        degenerate_format: false,
    })
}

/// Cayley hyperdeterminant of a three-qubit state, evaluated term by term
/// from the degree-4 polynomial; `μ = sqrt(4|Det|)`.
pub fn cayley_hyperdet(state: &PureState) -> Result<InvariantReport> {
    if state.dims() != [2, 2, 2] {
        return Err(Error::InvalidInput(format!(
            "hyperdeterminant needs three qubit factors, got {:?}",
            state.dims()
        )));
    }
    let a = state.amplitudes();
    // Index abc -> 4a + 2b + c.
    let p = |i: usize, j: usize, k: usize| a[4 * i + 2 * j + k];
    let squares = p(0, 0, 0).powi(2) * p(1, 1, 1).powi(2)
        + p(0, 0, 1).powi(2) * p(1, 1, 0).powi(2)
        + p(0, 1, 0).powi(2) * p(1, 0, 1).powi(2)
        + p(0, 1, 1).powi(2) * p(1, 0, 0).powi(2);
    let cross = p(0, 0, 0) * p(0, 0, 1) * p(1, 1, 0) * p(1, 1, 1)
        + p(0, 0, 0) * p(0, 1, 0) * p(1, 0, 1) * p(1, 1, 1)
        + p(0, 0, 0) * p(0, 1, 1) * p(1, 0, 0) * p(1, 1, 1)
        + p(0, 0, 1) * p(0, 1, 0) * p(1, 0, 1) * p(1, 1, 0)
        + p(0, 0, 1) * p(0, 1, 1) * p(1, 1, 0) * p(1, 0, 0)
        + p(0, 1, 0) * p(0, 1, 1) * p(1, 0, 1) * p(1, 0, 0);
    let quad = p(0, 0, 0) * p(0, 1, 1) * p(1, 0, 1) * p(1, 1, 0)
        + p(0, 0, 1) * p(0, 1, 0) * p(1, 0, 0) * p(1, 1, 1);
    let value = squares - cross.scale(2.0) + quad.scale(4.0);
    let modulus = value.norm();
    Ok(InvariantReport {
        name: "hyperdeterminant".into(),
        value,
        modulus,
        derived_concurrence: (4.0 * modulus).sqrt(),
        degenerate_format: false,
    })
}

/// 3-tangle `τ(ψ) = 4 |Det[ψ]|`.
pub fn three_tangle(state: &PureState) -> Result<f64> {
    Ok(4.0 * cayley_hyperdet(state)?.modulus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::StateSampler;
    use crate::CVector;
    use approx::assert_abs_diff_eq;

    /// Resultant-style oracle: for the 2x2x2 tensor, writing the two slices
    /// along the first index as matrices M0, M1, the hyperdeterminant is the
    /// discriminant b² - 4ac of det(M0 + z M1) = az² + bz + c, up to sign.
    fn hyperdet_oracle(state: &PureState) -> C64 {
        let a = state.amplitudes();
        let m = |i: usize, j: usize, k: usize| a[4 * i + 2 * j + k];
        let det = |z: C64| {
            (m(0, 0, 0) + z * m(1, 0, 0)) * (m(0, 1, 1) + z * m(1, 1, 1))
                - (m(0, 0, 1) + z * m(1, 0, 1)) * (m(0, 1, 0) + z * m(1, 1, 0))
        };
        // Quadratic coefficients by interpolation at z = 0, 1, -1.
        let c = det(C64::new(0.0, 0.0));
        let d1 = det(C64::new(1.0, 0.0));
        let dm1 = det(C64::new(-1.0, 0.0));
        let aa = (d1 + dm1).scale(0.5) - c;
        let b = (d1 - dm1).scale(0.5);
        b * b - aa * c * C64::new(4.0, 0.0)
    }

    #[test]
    fn bell_state_determinant() {
        let r = det_concurrence(&PureState::bell()).unwrap();
        assert_abs_diff_eq!(r.modulus, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(r.derived_concurrence, 1.0, epsilon = 1e-12);
        assert!(!r.degenerate_format);
    }

    #[test]
    fn product_state_determinant_is_zero() {
        let psi = PureState::basis_state(vec![3, 3], &[1, 2]).unwrap();
        let r = det_concurrence(&psi).unwrap();
        assert_eq!(r.modulus, 0.0);
        assert_eq!(r.derived_concurrence, 0.0);
    }

    #[test]
    fn max_entangled_qutrits() {
        let psi = PureState::max_entangled(3);
        let r = det_concurrence(&psi).unwrap();
        assert_abs_diff_eq!(r.derived_concurrence, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn unequal_dims_flagged_not_error() {
        let psi = PureState::basis_state(vec![2, 3], &[0, 0]).unwrap();
        let r = det_concurrence(&psi).unwrap();
        assert!(r.degenerate_format);
        assert_eq!(r.derived_concurrence, 0.0);
    }

    #[test]
    fn wrong_factor_count_rejected() {
        let psi = PureState::ghz(3);
        assert!(det_concurrence(&psi).is_err());
        let psi = PureState::basis_state(vec![4], &[0]).unwrap();
        assert!(cayley_hyperdet(&psi).is_err());
    }

    #[test]
    fn ghz_hyperdeterminant() {
        let r = cayley_hyperdet(&PureState::ghz(3)).unwrap();
        assert_abs_diff_eq!(r.modulus, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(r.derived_concurrence, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(three_tangle(&PureState::ghz(3)).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn w_state_hyperdeterminant_vanishes() {
        let r = cayley_hyperdet(&PureState::w_state(3)).unwrap();
        assert_abs_diff_eq!(r.modulus, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn biseparable_tangle_vanishes() {
        // |0> ⊗ Bell on the last two qubits.
        let s = 1.0 / 2f64.sqrt();
        let mut amps = vec![C64::new(0.0, 0.0); 8];
        amps[0] = C64::new(s, 0.0); // |000>
        amps[3] = C64::new(s, 0.0); // |011>
        let psi = PureState::new(vec![2, 2, 2], CVector::from_vec(amps)).unwrap();
        assert_abs_diff_eq!(three_tangle(&psi).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn single_basis_state_hyperdeterminant_vanishes() {
        let psi = PureState::basis_state(vec![2, 2, 2], &[0, 0, 0]).unwrap();
        assert_eq!(cayley_hyperdet(&psi).unwrap().modulus, 0.0);
    }

    #[test]
    fn hyperdet_matches_discriminant_oracle() {
        let mut sampler = StateSampler::new(23);
        for _ in 0..50 {
            let psi = sampler.pure_state(&[2, 2, 2]);
            let lhs = cayley_hyperdet(&psi).unwrap().value;
            let rhs = hyperdet_oracle(&psi);
            assert!((lhs - rhs).norm() < 1e-12, "lhs={lhs} rhs={rhs}");
        }
    }

    #[test]
    fn hyperdet_degree_four_homogeneity() {
        let mut sampler = StateSampler::new(29);
        for _ in 0..20 {
            let psi = sampler.pure_state(&[2, 2, 2]);
            let c = sampler.complex_gaussian();
            let scaled = PureState::new_unnormalized(
                vec![2, 2, 2],
                psi.amplitudes().map(|x| c * x),
            )
            .unwrap();
            let lhs = cayley_hyperdet(&scaled).unwrap().value;
            let rhs = c.powi(4) * cayley_hyperdet(&psi).unwrap().value;
            assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn det_invariant_under_special_linear_action() {
        let mut sampler = StateSampler::new(31);
        for _ in 0..20 {
            let psi = sampler.pure_state(&[3, 3]);
            let before = det_concurrence(&psi).unwrap().value;
            // Random SL(3) x SL(3) action.
            let mut g = crate::CMatrix::zeros(3, 3);
            let mut h = crate::CMatrix::zeros(3, 3);
            for i in 0..3 {
                for j in 0..3 {
                    g[(i, j)] = sampler.complex_gaussian();
                    h[(i, j)] = sampler.complex_gaussian();
                }
            }
            // Scale both so their determinants become one.
            let gd = g.determinant();
            let g = g.map(|x| x / gd.powf(1.0 / 3.0));
            let hd = h.determinant();
            let h = h.map(|x| x / hd.powf(1.0 / 3.0));
            let op = g.kronecker(&h);
            let moved = psi.apply(&op).unwrap();
            let after = det_concurrence(&moved).unwrap().value;
            assert!((before - after).norm() < 1e-9 * (1.0 + before.norm()));
        }
    }

    #[test]
    fn nonzero_hyperdet_is_never_unstable() {
        let mut sampler = StateSampler::new(37);
        let basis = crate::repn::local_algebra(&[2, 2, 2]).unwrap();
        let params = crate::orbit::FlowParams::default();
        for _ in 0..20 {
            let psi = sampler.pure_state(&[2, 2, 2]);
            if cayley_hyperdet(&psi).unwrap().modulus > 1e-6 {
                let label = crate::orbit::classify(&psi, &basis, &params).unwrap();
                assert_ne!(label, crate::orbit::Stability::Unstable);
            }
        }
    }
}
