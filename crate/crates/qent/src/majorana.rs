//! Binary-form picture of spin states: root configurations, star points on
//! the sphere, the balanced-configuration residual, Hilbert–Mumford
//! multiplicity classification, and the spin-1 bilinear invariants.

use crate::states::PureState;
use crate::{C64, Error, Result};

/// Leading coefficients below this fraction of the coefficient norm are
/// treated as exact zeros, i.e. roots at infinity.
const LEADING_TOL: f64 = 1e-12;
/// Chordal-distance threshold for clustering numerically computed roots.
const CLUSTER_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct RootConfiguration {
    pub finite_roots: Vec<C64>,
    pub infinity_multiplicity: usize,
    pub two_s: usize,
}

#[derive(Debug, Clone)]
pub struct StarPoints {
    /// One unit vector per root, with multiplicity.
    pub points: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HmClass {
    Unstable,
    SemistableNotStable,
    Stable,
}

impl HmClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            HmClass::Unstable => "unstable",
            HmClass::SemistableNotStable => "semistable_not_stable",
            HmClass::Stable => "stable",
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Coefficients of the associated binary form, dehomogenized: entry `j` is
/// the coefficient of `w^j`, with `j = 0` carrying the top-weight amplitude.
fn form_coefficients(state: &PureState, two_s: usize) -> Result<Vec<C64>> {
    if state.dims() != [two_s + 1] {
        return Err(Error::DimensionMismatch(format!(
            "spin state must have dims [{}], got {:?}",
            two_s + 1,
            state.dims()
        )));
    }
    let amp = state.amplitudes();
    if amp.norm() < 1e-12 {
        return Err(Error::InvalidInput("zero state has no root configuration".into()));
    }
    Ok((0..=two_s)
        .map(|j| amp[j].scale(binomial(two_s, j).sqrt()))
        .collect())
}

/// Roots of a polynomial by Durand–Kerner iteration on the monic rescaling.
/// Zero roots are deflated exactly first; the remaining simultaneous
/// iteration converges quadratically for the moderate degrees (≤ 2s) here.
fn polynomial_roots(coeffs: &[C64]) -> Vec<C64> {
    let lead = coeffs[coeffs.len() - 1];
    let mut monic: Vec<C64> = coeffs.iter().map(|c| c / lead).collect();
    let scale = monic.iter().map(|c| c.norm()).fold(0.0, f64::max);

    let mut roots = Vec::new();
    while monic.len() > 1 && monic[0].norm() < LEADING_TOL * scale {
        roots.push(C64::new(0.0, 0.0));
        monic.remove(0);
    }
    let degree = monic.len() - 1;
    if degree == 0 {
        return roots;
    }

    // Cauchy bound on root magnitudes fixes the initial circle.
    let radius = 1.0 + monic[..degree].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..degree)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + 0.4;
            C64::from_polar(radius, angle)
        })
        .collect();
    let eval = |w: C64| {
        let mut acc = C64::new(1.0, 0.0);
        for c in monic[..degree].iter().rev() {
            acc = acc * w + c;
        }
        acc
    };
    for _ in 0..200 {
        let mut moved = 0.0f64;
        for k in 0..degree {
            let mut denom = C64::new(1.0, 0.0);
            for j in 0..degree {
                if j != k {
                    denom *= z[k] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                // Collided iterates: nudge apart and retry next sweep.
                z[k] += C64::new(1e-8, 1e-8);
                moved = f64::MAX;
                continue;
            }
            let delta = eval(z[k]) / denom;
            z[k] -= delta;
            moved = moved.max(delta.norm() / z[k].norm().max(1.0));
        }
        if moved < 1e-15 {
            break;
        }
    }
    roots.extend(z);
    roots
}

/// Root configuration of the binary form attached to a spin state.
pub fn to_roots(state: &PureState, two_s: usize) -> Result<RootConfiguration> {
    let mut coeffs = form_coefficients(state, two_s)?;
    let scale = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    // Vanishing top coefficients push roots to infinity.
    let mut infinity_multiplicity = 0;
    while coeffs.len() > 1 && coeffs.last().unwrap().norm() < LEADING_TOL * scale {
        coeffs.pop();
        infinity_multiplicity += 1;
    }
    let finite_roots = polynomial_roots(&coeffs);
    debug_assert_eq!(finite_roots.len() + infinity_multiplicity, two_s);
    Ok(RootConfiguration { finite_roots, infinity_multiplicity, two_s })
}

/// Inverse stereographic projection; 0 maps to the south pole, infinity to
/// the north pole.
pub fn stereographic(z: C64) -> [f64; 3] {
    let denom = 1.0 + z.norm_sqr();
    [2.0 * z.re / denom, 2.0 * z.im / denom, (z.norm_sqr() - 1.0) / denom]
}

pub fn star_points(roots: &RootConfiguration) -> StarPoints {
    let mut points: Vec<[f64; 3]> =
        roots.finite_roots.iter().map(|z| stereographic(*z)).collect();
    points.extend(std::iter::repeat_n([0.0, 0.0, 1.0], roots.infinity_multiplicity));
    StarPoints { points }
}

/// Norm of the star-point sum; zero exactly on completely entangled spin
/// states.
pub fn balance_residual(state: &PureState, two_s: usize) -> Result<f64> {
    let stars = star_points(&to_roots(state, two_s)?);
    let mut sum = [0.0f64; 3];
    for p in &stars.points {
        for a in 0..3 {
            sum[a] += p[a];
        }
    }
    Ok((sum[0] * sum[0] + sum[1] * sum[1] + sum[2] * sum[2]).sqrt())
}

fn classify_multiplicity(max_mult: usize, two_s: usize) -> HmClass {
    // Compare 2m with 2s to avoid fractions for half-integral spin.
    match (2 * max_mult).cmp(&two_s) {
        std::cmp::Ordering::Greater => HmClass::Unstable,
        std::cmp::Ordering::Equal => HmClass::SemistableNotStable,
        std::cmp::Ordering::Less => HmClass::Stable,
    }
}

/// Hilbert–Mumford classification from exactly known root multiplicities;
/// equal means bitwise equal, no clustering.
pub fn hm_classify_exact(roots: &RootConfiguration) -> HmClass {
    let mut max_mult = roots.infinity_multiplicity;
    for (i, z) in roots.finite_roots.iter().enumerate() {
        let m = roots.finite_roots[i..].iter().filter(|w| *w == z).count();
        max_mult = max_mult.max(m);
    }
    classify_multiplicity(max_mult, roots.two_s)
}

/// Hilbert–Mumford classification for numerically computed roots, clustering
/// points closer than the chordal tolerance on the sphere.
pub fn hm_classify(roots: &RootConfiguration) -> HmClass {
    let stars = star_points(roots);
    let mut max_mult = 0usize;
    for (i, p) in stars.points.iter().enumerate() {
        let m = stars.points[i..]
            .iter()
            .filter(|q| {
                let d2: f64 = (0..3).map(|a| (p[a] - q[a]).powi(2)).sum();
                d2.sqrt() < CLUSTER_TOL
            })
            .count();
        max_mult = max_mult.max(m);
    }
    classify_multiplicity(max_mult, roots.two_s)
}

/// Rebuild the spin state from a root configuration, up to normalization and
/// global phase.
pub fn from_roots(roots: &RootConfiguration) -> Result<PureState> {
    let two_s = roots.two_s;
    if roots.finite_roots.len() + roots.infinity_multiplicity != two_s {
        return Err(Error::InvalidInput("root count must equal 2s".into()));
    }
    // Monic polynomial with the given finite roots.
    let mut poly = vec![C64::new(1.0, 0.0)];
    for z in &roots.finite_roots {
        let mut next = vec![C64::new(0.0, 0.0); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] += *c;
            next[k] -= *c * z;
        }
        poly = next;
    }
    let mut amps = crate::CVector::zeros(two_s + 1);
    for (j, c) in poly.iter().enumerate() {
        amps[j] = *c / C64::new(binomial(two_s, j).sqrt(), 0.0);
    }
    PureState::new_unnormalized(vec![two_s + 1], amps)?.normalized()
}

/// Spin-1 bilinear invariants in the vector model: the bilinear square
/// `(ψ,ψ)`, the cross-product norm `|[ψ, ψ*]|`, and the canonical angle φ
/// with `|(ψ,ψ)| = cos 2φ`.
pub fn spin1_invariants(state: &PureState) -> Result<(C64, f64, f64)> {
    if state.dims() != [3] {
        return Err(Error::DimensionMismatch(format!(
            "spin-1 invariants need dims [3], got {:?}",
            state.dims()
        )));
    }
    let a = state.amplitudes();
    let (cp, c0, cm) = (a[0], a[1], a[2]);
    // Spherical basis |±1> = ∓(x ± iy)/√2, |0> = z, so (v, v) = c₀² − 2c₊c₋.
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let v = [
        (cm - cp).scale(inv_sqrt2),
        (cp + cm).scale(inv_sqrt2) * C64::new(0.0, -1.0),
        c0,
    ];
    let bilinear = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    let w = [v[0].conj(), v[1].conj(), v[2].conj()];
    let cross = [
        v[1] * w[2] - v[2] * w[1],
        v[2] * w[0] - v[0] * w[2],
        v[0] * w[1] - v[1] * w[0],
    ];
    let cross_norm = cross.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let phi = bilinear.norm().clamp(0.0, 1.0).acos() / 2.0;
    Ok((bilinear, cross_norm, phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fluct::entanglement_residual;
    use crate::random::StateSampler;
    use crate::repn::{spin_generators, SpinLabel};
    use crate::CVector;
    use approx::assert_abs_diff_eq;

    fn spin_state(two_s: usize, amps: Vec<C64>) -> PureState {
        PureState::new_unnormalized(vec![two_s + 1], CVector::from_vec(amps))
            .unwrap()
            .normalized()
            .unwrap()
    }

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn highest_weight_all_roots_at_infinity() {
        for two_s in 1..=6 {
            let psi = PureState::basis_state(vec![two_s + 1], &[0]).unwrap();
            let r = to_roots(&psi, two_s).unwrap();
            assert_eq!(r.infinity_multiplicity, two_s);
            assert!(r.finite_roots.is_empty());
        }
    }

    #[test]
    fn lowest_weight_all_roots_at_zero() {
        let psi = PureState::basis_state(vec![5], &[4]).unwrap();
        let r = to_roots(&psi, 4).unwrap();
        assert_eq!(r.infinity_multiplicity, 0);
        for z in &r.finite_roots {
            assert!(z.norm() < 1e-10);
        }
    }

    #[test]
    fn spin_one_zero_state_roots() {
        let psi = PureState::basis_state(vec![3], &[1]).unwrap();
        let r = to_roots(&psi, 2).unwrap();
        assert_eq!(r.infinity_multiplicity, 1);
        assert_eq!(r.finite_roots.len(), 1);
        assert!(r.finite_roots[0].norm() < 1e-12);
    }

    #[test]
    fn cat_state_roots_of_unity() {
        for two_s in [2usize, 3, 4, 6] {
            let mut amps = vec![re(0.0); two_s + 1];
            amps[0] = re(1.0);
            amps[two_s] = re(-1.0);
            let psi = spin_state(two_s, amps);
            let r = to_roots(&psi, two_s).unwrap();
            assert_eq!(r.infinity_multiplicity, 0);
            // Each root is a two_s-th root of unity, and all are distinct.
            for z in &r.finite_roots {
                assert_abs_diff_eq!(z.norm(), 1.0, epsilon = 1e-8);
                assert_abs_diff_eq!((z.powu(two_s as u32) - re(1.0)).norm(), 0.0, epsilon = 1e-7);
            }
            for i in 0..r.finite_roots.len() {
                for j in 0..i {
                    assert!((r.finite_roots[i] - r.finite_roots[j]).norm() > 1e-3);
                }
            }
        }
    }

    #[test]
    fn zero_state_rejected() {
        let zero =
            PureState::new_unnormalized(vec![3], CVector::zeros(3)).unwrap();
        assert!(to_roots(&zero, 2).is_err());
    }

    #[test]
    fn stereographic_poles_and_equator() {
        assert_eq!(stereographic(re(0.0)), [0.0, 0.0, -1.0]);
        let eq = stereographic(C64::new(0.0, 1.0));
        assert_abs_diff_eq!(eq[2], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(eq[1], 1.0, epsilon = 1e-15);
        let far = stereographic(re(1e12));
        assert!((far[2] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn star_points_are_unit_vectors() {
        let mut sampler = StateSampler::new(59);
        for _ in 0..20 {
            let psi = sampler.pure_state(&[6]);
            let stars = star_points(&to_roots(&psi, 5).unwrap());
            assert_eq!(stars.points.len(), 5);
            for p in &stars.points {
                let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                assert_abs_diff_eq!(n, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn balance_examples() {
        // |0> for integral spin: equal numbers at both poles.
        for two_s in [2usize, 4, 6] {
            let psi = PureState::basis_state(vec![two_s + 1], &[two_s / 2]).unwrap();
            assert!(balance_residual(&psi, two_s).unwrap() < 1e-8);
        }
        // Cat state: evenly distributed along the equator.
        let mut amps = vec![re(0.0); 5];
        amps[0] = re(1.0);
        amps[4] = re(-1.0);
        assert!(balance_residual(&spin_state(4, amps), 4).unwrap() < 1e-7);
        // Highest weight: 2s copies of the north pole.
        let top = PureState::basis_state(vec![5], &[0]).unwrap();
        assert_abs_diff_eq!(balance_residual(&top, 4).unwrap(), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn balance_zero_iff_entanglement_residual_zero() {
        let mut sampler = StateSampler::new(61);
        for two_s in [2usize, 3, 4, 5, 6] {
            let basis = spin_generators(SpinLabel::new(two_s));
            for _ in 0..30 {
                let psi = sampler.pure_state(&[two_s + 1]);
                let b = balance_residual(&psi, two_s).unwrap();
                let e = entanglement_residual(&psi, &basis).unwrap();
                assert_eq!(b <= 1e-8, e <= 1e-8, "two_s={two_s} b={b} e={e}");
            }
            // Include states engineered to be balanced.
            let mid = PureState::basis_state(vec![two_s + 1], &[two_s / 2]).unwrap();
            if two_s % 2 == 0 {
                assert!(entanglement_residual(&mid, &basis).unwrap() <= 1e-8);
                assert!(balance_residual(&mid, two_s).unwrap() <= 1e-8);
            }
        }
    }

    #[test]
    fn rotation_covariance_of_stars() {
        // exp(iθ J_ℓ) moves the stars by the rotation with angle θ about the
        // axis ℓ reflected through the yz-plane.
        fn rodrigues(axis: [f64; 3], theta: f64, p: [f64; 3]) -> [f64; 3] {
            let (s, c) = theta.sin_cos();
            let dot = axis[0] * p[0] + axis[1] * p[1] + axis[2] * p[2];
            let cross = [
                axis[1] * p[2] - axis[2] * p[1],
                axis[2] * p[0] - axis[0] * p[2],
                axis[0] * p[1] - axis[1] * p[0],
            ];
            [
                p[0] * c + cross[0] * s + axis[0] * dot * (1.0 - c),
                p[1] * c + cross[1] * s + axis[1] * dot * (1.0 - c),
                p[2] * c + cross[2] * s + axis[2] * dot * (1.0 - c),
            ]
        }
        fn hausdorff(a: &[[f64; 3]], b: &[[f64; 3]]) -> f64 {
            let one_way = |x: &[[f64; 3]], y: &[[f64; 3]]| {
                x.iter()
                    .map(|p| {
                        y.iter()
                            .map(|q| {
                                (0..3).map(|i| (p[i] - q[i]).powi(2)).sum::<f64>().sqrt()
                            })
                            .fold(f64::INFINITY, f64::min)
                    })
                    .fold(0.0, f64::max)
            };
            one_way(a, b).max(one_way(b, a))
        }

        let mut sampler = StateSampler::new(67);
        for two_s in [1usize, 2, 3, 4] {
            let basis = spin_generators(SpinLabel::new(two_s));
            for _ in 0..8 {
                let psi = sampler.pure_state(&[two_s + 1]);
                let axis = sampler.direction();
                let theta = sampler.uniform(-2.5, 2.5);
                let mut j_axis = crate::CMatrix::zeros(two_s + 1, two_s + 1);
                for (a, g) in basis.generators.iter().enumerate() {
                    j_axis += g.scale(axis[a]);
                }
                let u = crate::orbit::hermitian_exp(&j_axis, C64::new(0.0, theta));
                let rotated = psi.apply(&u).unwrap().normalized().unwrap();

                let before = star_points(&to_roots(&psi, two_s).unwrap());
                let after = star_points(&to_roots(&rotated, two_s).unwrap());
                let mirror_axis = [-axis[0], axis[1], axis[2]];
                let moved: Vec<[f64; 3]> = before
                    .points
                    .iter()
                    .map(|p| rodrigues(mirror_axis, theta, *p))
                    .collect();
                let d = hausdorff(&moved, &after.points);
                assert!(d < 1e-6, "two_s={two_s} hausdorff={d}");
            }
        }
    }

    #[test]
    fn hm_classify_exact_examples() {
        let z0 = re(0.0);
        let unstable = RootConfiguration {
            finite_roots: vec![z0, z0, z0],
            infinity_multiplicity: 2,
            two_s: 5,
        };
        assert_eq!(hm_classify_exact(&unstable), HmClass::Unstable);
        let semi = RootConfiguration {
            finite_roots: vec![z0, z0, re(1.0)],
            infinity_multiplicity: 1,
            two_s: 4,
        };
        assert_eq!(hm_classify_exact(&semi), HmClass::SemistableNotStable);
        let stable = RootConfiguration {
            finite_roots: vec![re(0.0), re(1.0), re(2.0), re(3.0)],
            infinity_multiplicity: 1,
            two_s: 5,
        };
        assert_eq!(hm_classify_exact(&stable), HmClass::Stable);
    }

    #[test]
    fn hm_classify_clusters_noisy_roots() {
        let noisy = RootConfiguration {
            finite_roots: vec![re(0.0), re(1e-9), C64::new(0.0, 1e-9), re(2.0)],
            infinity_multiplicity: 0,
            two_s: 4,
        };
        // Three roots coalesce at 0 under chordal clustering: m=3 > s=2.
        assert_eq!(hm_classify(&noisy), HmClass::Unstable);
        // The exact path keeps them distinct.
        assert_eq!(hm_classify_exact(&noisy), HmClass::Stable);
    }

    #[test]
    fn hm_agrees_with_flow_on_curated_spin_states() {
        // Spin-2 highest weight: root ∞ with multiplicity 4 > s.
        let top = PureState::basis_state(vec![5], &[0]).unwrap();
        assert_eq!(hm_classify_exact(&to_roots(&top, 4).unwrap()), HmClass::Unstable);
        let basis = spin_generators(SpinLabel::new(4));
        let params = crate::orbit::FlowParams::default();
        let label = crate::orbit::classify(&top, &basis, &params).unwrap();
        assert!(matches!(
            label,
            crate::orbit::Stability::Unstable | crate::orbit::Stability::Coherent
        ));

        // Cat state: four simple roots, stable; flow agrees.
        let mut amps = vec![re(0.0); 5];
        amps[0] = re(1.0);
        amps[4] = re(-1.0);
        let cat = spin_state(4, amps);
        assert_eq!(hm_classify(&to_roots(&cat, 4).unwrap()), HmClass::Stable);
        assert_eq!(
            crate::orbit::classify(&cat, &basis, &params).unwrap(),
            crate::orbit::Stability::Stable
        );
    }

    #[test]
    fn reconstruction_round_trip() {
        let mut sampler = StateSampler::new(71);
        for two_s in 1..=6 {
            for _ in 0..10 {
                let psi = sampler.pure_state(&[two_s + 1]);
                let roots = to_roots(&psi, two_s).unwrap();
                let rebuilt = from_roots(&roots).unwrap();
                let overlap = psi.amplitudes().dotc(rebuilt.amplitudes()).norm();
                assert!(overlap >= 1.0 - 1e-8, "two_s={two_s} fidelity {overlap}");
            }
        }
    }

    #[test]
    fn spin1_bilinear_examples() {
        // Coherent highest weight: isotropic vector, φ = π/4.
        let top = PureState::basis_state(vec![3], &[0]).unwrap();
        let (b, _, phi) = spin1_invariants(&top).unwrap();
        assert_abs_diff_eq!(b.norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(phi, std::f64::consts::FRAC_PI_4, epsilon = 1e-12);

        // Real unit vector (the |0> state is ẑ): completely entangled.
        let zero = PureState::basis_state(vec![3], &[1]).unwrap();
        let (b, cross, phi) = spin1_invariants(&zero).unwrap();
        assert_abs_diff_eq!(b.norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cross, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(phi, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn spin1_canonical_family() {
        // m·cosφ + i n·sinφ with m = x̂, n = ŷ: |(ψ,ψ)| = cos 2φ.
        for &phi0 in &[0.0, 0.2, std::f64::consts::FRAC_PI_8, 0.7] {
            let (c, s) = (phi0.cos(), phi0.sin());
            // v = (cos φ, i sin φ, 0) → c₊ = (i v_y − v_x)/√2, c₋ = (v_x + i v_y)/√2.
            let inv = std::f64::consts::FRAC_1_SQRT_2;
            let cp = C64::new(-(c + s), 0.0).scale(inv);
            let cm = C64::new(c - s, 0.0).scale(inv);
            let psi = spin_state(2, vec![cp, C64::new(0.0, 0.0), cm]);
            let (b, _, phi) = spin1_invariants(&psi).unwrap();
            assert_abs_diff_eq!(b.norm(), (2.0 * phi0).cos().abs(), epsilon = 1e-12);
            if phi0 <= std::f64::consts::FRAC_PI_4 {
                assert_abs_diff_eq!(phi, phi0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn spin1_concurrence_matches_flow() {
        let mut sampler = StateSampler::new(73);
        let basis = spin_generators(SpinLabel::new(2));
        let params = crate::orbit::FlowParams::default();
        for _ in 0..25 {
            let psi = sampler.pure_state(&[3]);
            let (b, _, _) = spin1_invariants(&psi).unwrap();
            let mu = crate::orbit::concurrence(&psi, &basis, &params).unwrap();
            assert_abs_diff_eq!(b.norm(), mu, epsilon = 1e-6);
        }
    }
}
