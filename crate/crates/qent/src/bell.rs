//! Pentagram Bell inequality for spin 1 and the CHSH functional for two
//! qubits.
//!
//! A pentagram is a cyclic quintuplet of unit vectors in 3-space with
//! consecutive members orthogonal. The operator `A = Σ |ℓ_i><ℓ_i|` has trace
//! 5, and classical realism bounds `<ψ|A|ψ> = Σ cos²α_i` by 2, while every
//! noncoherent spin-1 state violates the bound for some pentagram.

use nalgebra::{Matrix3, Vector3};

use crate::random::StateSampler;
use crate::states::PureState;
use crate::{C64, Error, Result};

const ORTHOGONALITY_TOL: f64 = 1e-10;
/// Violation threshold on top of the classical bound 2.
const VIOLATION_EPS: f64 = 1e-10;
/// Two directions count as a parallel pair above this overlap.
const PARALLEL_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Pentagram {
    /// Five unit vectors, consecutive ones orthogonal, indices mod 5.
    pub vectors: [Vector3<f64>; 5],
}

#[derive(Debug, Clone)]
pub struct PentagramReport {
    pub operator_a: Matrix3<f64>,
    /// Eigenvalues sorted descending.
    pub spectrum: [f64; 3],
    pub bell_value: Option<f64>,
    pub violated: bool,
}

impl Pentagram {
    pub fn new(vectors: [Vector3<f64>; 5]) -> Result<Self> {
        for (i, v) in vectors.iter().enumerate() {
            if (v.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidInput(format!("pentagram vector {i} is not unit")));
            }
            let next = vectors[(i + 1) % 5];
            if v.dot(&next).abs() > ORTHOGONALITY_TOL {
                return Err(Error::InvalidInput(format!(
                    "pentagram vectors {i} and {} are not orthogonal",
                    (i + 1) % 5
                )));
            }
        }
        Ok(Pentagram { vectors })
    }

    /// True when some pair of (not necessarily consecutive) members is
    /// parallel; such pentagrams have the degenerate spectrum {2, 2, 1}.
    pub fn has_parallel_pair(&self) -> bool {
        for i in 0..5 {
            for j in (i + 1)..5 {
                if self.vectors[i].dot(&self.vectors[j]).abs() > 1.0 - PARALLEL_TOL {
                    return true;
                }
            }
        }
        false
    }
}

/// Deterministic orthonormal frame of the plane orthogonal to `l`.
fn plane_frame(l: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let seed = if l.z.abs() < 0.9 { Vector3::z() } else { Vector3::x() };
    let u = seed.cross(l).normalize();
    let v = l.cross(&u);
    (u, v)
}

/// Build a pentagram from five chain parameters: two spherical angles for
/// ℓ₁, then one in-plane rotation angle for each of ℓ₂, ℓ₃, ℓ₄; ℓ₅ closes
/// the chain as the normalized cross product of ℓ₄ and ℓ₁.
pub fn make_pentagram(params: &[f64; 5]) -> Result<Pentagram> {
    let [t1, t2, a2, a3, a4] = *params;
    let l1 = Vector3::new(t1.sin() * t2.cos(), t1.sin() * t2.sin(), t1.cos());
    let (u, v) = plane_frame(&l1);
    let l2 = u * a2.cos() + v * a2.sin();
    let l3 = l1 * a3.cos() + l2.cross(&l1) * a3.sin();
    let l4 = l2 * a4.cos() + l3.cross(&l2) * a4.sin();
    let closing = l4.cross(&l1);
    if closing.norm() < 1e-9 {
        return Err(Error::InvalidInput(
            "fourth pentagram vector is parallel to the first; the chain cannot close".into(),
        ));
    }
    let l5 = closing.normalize();
    Pentagram::new([l1, l2, l3, l4, l5])
}

/// Recover chain parameters reproducing the first four vectors of a
/// pentagram (the fifth is determined up to sign, which is immaterial for
/// every quadratic functional here).
pub fn chain_parameters(p: &Pentagram) -> [f64; 5] {
    let [l1, l2, l3, l4, _] = p.vectors;
    let (u, v) = plane_frame(&l1);
    [
        l1.z.clamp(-1.0, 1.0).acos(),
        l1.y.atan2(l1.x),
        l2.dot(&v).atan2(l2.dot(&u)),
        l3.dot(&l2.cross(&l1)).atan2(l3.dot(&l1)),
        l4.dot(&l3.cross(&l2)).atan2(l4.dot(&l2)),
    ]
}

/// Uniform ℓ₁ with uniform chain angles; for property tests.
pub fn random_pentagram(sampler: &mut StateSampler) -> Pentagram {
    loop {
        let params = [
            sampler.uniform(-1.0, 1.0f64).acos(),
            sampler.uniform(-std::f64::consts::PI, std::f64::consts::PI),
            sampler.uniform(-std::f64::consts::PI, std::f64::consts::PI),
            sampler.uniform(-std::f64::consts::PI, std::f64::consts::PI),
            sampler.uniform(-std::f64::consts::PI, std::f64::consts::PI),
        ];
        if let Ok(p) = make_pentagram(&params) {
            return p;
        }
    }
}

/// The regular pentagram whose symmetry axis is `axis`: the unique (up to
/// rotation about the axis) configuration with all five vectors at equal
/// polar angle, consecutive ones orthogonal.
pub fn regular_pentagram(axis: &Vector3<f64>) -> Pentagram {
    let axis = axis.normalize();
    let (u, v) = plane_frame(&axis);
    let cos_sq = (std::f64::consts::PI / 5.0).cos() / (1.0 + (std::f64::consts::PI / 5.0).cos());
    let c = cos_sq.sqrt();
    let s = (1.0 - cos_sq).sqrt();
    let mut vectors = [Vector3::zeros(); 5];
    for (i, slot) in vectors.iter_mut().enumerate() {
        let phi = 4.0 * std::f64::consts::PI * i as f64 / 5.0;
        *slot = (u * phi.cos() + v * phi.sin()) * s + axis * c;
    }
    Pentagram::new(vectors).expect("regular pentagram satisfies the chain by construction")
}

pub fn pentagram_operator(p: &Pentagram) -> PentagramReport {
    let mut a = Matrix3::zeros();
    for l in &p.vectors {
        a += l * l.transpose();
    }
    let mut spectrum: Vec<f64> = a.symmetric_eigen().eigenvalues.iter().copied().collect();
    spectrum.sort_by(|x, y| y.total_cmp(x));
    PentagramReport {
        operator_a: a,
        spectrum: [spectrum[0], spectrum[1], spectrum[2]],
        bell_value: None,
        violated: false,
    }
}

/// Spin-1 state as a complex vector in 3-space, using the spherical basis
/// `|±1> = ∓(x ± iy)/√2`, `|0> = z`, so that `(v, v) = c₀² − 2c₊c₋` is the
/// rotation invariant.
pub fn spin1_vector(state: &PureState) -> Result<Vector3<C64>> {
    if state.dims() != [3] {
        return Err(Error::DimensionMismatch(format!(
            "spin-1 Bell functionals need dims [3], got {:?}",
            state.dims()
        )));
    }
    let a = state.amplitudes();
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    Ok(Vector3::new(
        (a[2] - a[0]).scale(inv),
        (a[0] + a[2]).scale(inv) * C64::new(0.0, -1.0),
        a[1],
    ))
}

/// Canonical frame of a spin-1 state: real orthonormal m, n with
/// `ψ ≃ m cos φ + i n sin φ` up to phase, and the angle φ ∈ [0, π/4].
pub fn canonical_frame(state: &PureState) -> Result<(Vector3<f64>, Vector3<f64>, f64)> {
    let v = spin1_vector(state)?;
    let bilinear = v.x * v.x + v.y * v.y + v.z * v.z;
    let alpha = bilinear.arg() / 2.0;
    let rot = (-C64::new(0.0, 1.0) * alpha).exp();
    let x = Vector3::new((v.x * rot).re, (v.y * rot).re, (v.z * rot).re);
    let y = Vector3::new((v.x * rot).im, (v.y * rot).im, (v.z * rot).im);
    let (big, small) = if x.norm() >= y.norm() { (x, y) } else { (y, x) };
    let m = big.normalize();
    let n = if small.norm() > 1e-9 {
        small.normalize()
    } else {
        plane_frame(&m).0
    };
    let phi = small.norm().clamp(0.0, 1.0).asin();
    Ok((m, n, phi))
}

/// `<ψ|A|ψ> = Σ_i |<ℓ_i, ψ>|²`; classical realism bounds this by 2.
pub fn bell_value(state: &PureState, p: &Pentagram) -> Result<f64> {
    let v = spin1_vector(state)?;
    Ok(p.vectors
        .iter()
        .map(|l| (v.x.scale(l.x) + v.y.scale(l.y) + v.z.scale(l.z)).norm_sqr())
        .sum())
}

pub fn pentagram_report(state: &PureState, p: &Pentagram) -> Result<PentagramReport> {
    let mut report = pentagram_operator(p);
    let value = bell_value(state, p)?;
    report.bell_value = Some(value);
    report.violated = value > 2.0 + VIOLATION_EPS;
    Ok(report)
}

/// Maximum of the Bell functional over states with canonical angle φ when
/// the pentagram eigenframe is optimally aligned:
/// `(λ₁+λ₂)/2 + ((λ₁−λ₂)/2)·cos 2φ`.
pub fn max_bell_value(phi: f64, p: &Pentagram) -> f64 {
    let [l1, l2, _] = pentagram_operator(p).spectrum;
    (l1 + l2) / 2.0 + (l1 - l2) / 2.0 * (2.0 * phi).cos()
}

/// Rotate the pentagram so that its top two eigenvectors land on the
/// state's canonical (m, n) frame; at this orientation the Bell value
/// attains `max_bell_value(φ)`.
pub fn align_pentagram(state: &PureState, p: &Pentagram) -> Result<Pentagram> {
    let (m, n, _) = canonical_frame(state)?;
    let a = pentagram_operator(p).operator_a;
    let eig = a.symmetric_eigen();
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let e1: Vector3<f64> = eig.eigenvectors.column(order[0]).into();
    let e2: Vector3<f64> = eig.eigenvectors.column(order[1]).into();
    let e3 = e1.cross(&e2);
    let target = Matrix3::from_columns(&[m, n, m.cross(&n)]);
    let source = Matrix3::from_columns(&[e1, e2, e3]);
    let rot = target * source.transpose();
    let mut vectors = p.vectors;
    for v in &mut vectors {
        *v = (rot * *v).normalize();
    }
    Pentagram::new(vectors)
}

/// `Σ_i <ψ|J²_{ℓ_i}|ψ>` via the operator identity `J²_ℓ ψ = ψ − (ℓ,ψ)ℓ`,
/// so the value is `5 − bell_value`; classical realism predicts ≥ 3.
pub fn jsquare_form(state: &PureState, p: &Pentagram) -> Result<f64> {
    Ok(5.0 - bell_value(state, p)?)
}

#[derive(Debug, Clone)]
pub struct ViolationSearch {
    pub pentagram: Pentagram,
    pub bell_value: f64,
    pub evaluations: usize,
}

/// States with canonical angle within this margin of π/4 are treated as
/// coherent; no violating pentagram exists for them.
const COHERENT_PHI_MARGIN: f64 = 1e-4;

/// Search for a pentagram violating the classical bound on the given spin-1
/// state. Returns `None` for (near-)coherent states; exhausting the budget
/// on other states is an error carrying the best value found.
pub fn search_violation(state: &PureState, budget: usize) -> Result<Option<ViolationSearch>> {
    let (m, n, phi) = canonical_frame(state)?;
    if phi >= std::f64::consts::FRAC_PI_4 - COHERENT_PHI_MARGIN {
        return Ok(None);
    }
    let mut evaluations = 0usize;
    let mut best: Option<(Pentagram, f64)> = None;
    let consider = |p: Pentagram, value: f64, best: &mut Option<(Pentagram, f64)>| {
        if best.as_ref().map_or(true, |(_, b)| value > *b) {
            *best = Some((p, value));
        }
    };

    // The regular pentagram aligned with the canonical axis already violates
    // the bound for moderate φ.
    let regular = regular_pentagram(&m);
    let value = bell_value(state, &regular)?;
    evaluations += 1;
    consider(regular, value, &mut best);

    // Degenerate pentagram in the canonical frame, ε-perturbed: the Bell
    // value grows off the {2,2,1} plateau at rate O(√ε).
    let l = m.cross(&n);
    let degenerate = Pentagram::new([m, n, m, n, l]).expect("canonical frame is orthonormal");
    let base = chain_parameters(&degenerate);
    let mut starts: Vec<[f64; 5]> = vec![chain_parameters(&regular_pentagram(&m))];
    let mut eps = 1e-3;
    while eps <= 0.3 {
        for pattern in [[0.0, 0.0, 1.0, 1.0, -1.0], [0.0, 0.0, -1.0, 1.0, 1.0], [0.0, 0.0, 1.0, -1.0, 1.0]] {
            let mut params = base;
            for (k, sign) in pattern.iter().enumerate() {
                params[k] += eps * sign;
            }
            starts.push(params);
        }
        eps *= 3.0;
    }

    for start in starts {
        if let Some((_, v)) = &best {
            if *v > 2.0 + VIOLATION_EPS {
                break;
            }
        }
        let mut params = start;
        let mut current = match make_pentagram(&params) {
            Ok(p) => {
                let v = bell_value(state, &p)?;
                evaluations += 1;
                consider(p, v, &mut best);
                v
            }
            Err(_) => continue,
        };
        let mut step = 0.2;
        while step > 1e-7 && evaluations < budget {
            let mut improved = false;
            for k in 0..5 {
                for sign in [1.0, -1.0] {
                    let mut trial = params;
                    trial[k] += step * sign;
                    let Ok(p) = make_pentagram(&trial) else { continue };
                    let v = bell_value(state, &p)?;
                    evaluations += 1;
                    if v > current {
                        current = v;
                        params = trial;
                        consider(p, v, &mut best);
                        improved = true;
                    }
                    if evaluations >= budget {
                        break;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
    }

    match best {
        Some((pentagram, value)) if value > 2.0 + VIOLATION_EPS => Ok(Some(ViolationSearch {
            pentagram,
            bell_value: value,
            evaluations,
        })),
        Some((_, value)) => Err(Error::BudgetExhausted { best: value }),
        None => Err(Error::BudgetExhausted { best: 0.0 }),
    }
}

/// CHSH functional `<A₁B₁> + <A₂B₁> + <A₂B₂> − <A₁B₂> + 2` with
/// `A_i = a_i·σ`, `B_j = b_j·σ`; classical realism predicts ≥ 0.
pub fn chsh_value(
    state: &PureState,
    a1: &Vector3<f64>,
    a2: &Vector3<f64>,
    b1: &Vector3<f64>,
    b2: &Vector3<f64>,
) -> Result<f64> {
    if state.dims() != [2, 2] {
        return Err(Error::DimensionMismatch(format!(
            "CHSH needs a two-qubit state, got dims {:?}",
            state.dims()
        )));
    }
    for (name, v) in [("a1", a1), ("a2", a2), ("b1", b1), ("b2", b2)] {
        if (v.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("direction {name} is not a unit vector")));
        }
    }
    let sigma = |v: &Vector3<f64>| {
        nalgebra::DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(v.z, 0.0),
                C64::new(v.x, -v.y),
                C64::new(v.x, v.y),
                C64::new(-v.z, 0.0),
            ],
        )
    };
    let amp = state.amplitudes();
    let correlation = |a: &Vector3<f64>, b: &Vector3<f64>| {
        let op = sigma(a).kronecker(&sigma(b));
        amp.dotc(&(op * amp)).re
    };
    Ok(correlation(a1, b1) + correlation(a2, b1) + correlation(a2, b2) - correlation(a1, b2)
        + 2.0)
}
