//! Dynamical systems: Hermitian operator bases for spin irreps, local product
//! algebras on multipartite spaces, induced actions on symmetric and
//! antisymmetric powers, and the Casimir operator.
//!
//! Generators are orthonormal with respect to the invariant form
//! `B(X, Y) = 2 Tr_def(X Y)` per simple factor, the normalization under which
//! the spin projectors `J_x, J_y, J_z` form an orthonormal basis of su(2) and
//! the spin-s Casimir equals `s(s+1)`.

use crate::{C64, CMatrix, Error, Result};

/// Default bound on the total Hilbert-space dimension of constructed algebras.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Twice the spin; the irrep dimension is `two_s + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinLabel {
    pub two_s: usize,
}

impl SpinLabel {
    pub fn new(two_s: usize) -> Self {
        SpinLabel { two_s }
    }

    pub fn dim(&self) -> usize {
        self.two_s + 1
    }

    pub fn spin(&self) -> f64 {
        self.two_s as f64 / 2.0
    }
}

/// An ordered orthonormal list of Hermitian generators of the algebra of
/// essential observables, acting on a Hilbert space of dimension `dim`.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    pub dim: usize,
    pub generators: Vec<CMatrix>,
    pub label: String,
}

impl OperatorBasis {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Angular-momentum matrices `[J_x, J_y, J_z]` in the (two_s+1)-dimensional
/// irrep. `J_z` is diagonal with entries `s, s-1, ..., -s`.
pub fn spin_generators(label: SpinLabel) -> OperatorBasis {
    let two_s = label.two_s;
    let dim = label.dim();
    let s = label.spin();

    let mut jz = CMatrix::zeros(dim, dim);
    for k in 0..dim {
        jz[(k, k)] = C64::new(s - k as f64, 0.0);
    }

    // Raising operator: J+ |s,m> = sqrt(s(s+1) - m(m+1)) |s,m+1>,
    // with basis index k corresponding to m = s - k.
    let mut jplus = CMatrix::zeros(dim, dim);
    for k in 1..dim {
        let m = s - k as f64;
        let amp = (s * (s + 1.0) - m * (m + 1.0)).sqrt();
        jplus[(k - 1, k)] = C64::new(amp, 0.0);
    }
    let jminus = jplus.adjoint();

    let jx = (&jplus + &jminus).scale(0.5);
    let jy = (&jplus - &jminus) * C64::new(0.0, -0.5);

    OperatorBasis {
        dim,
        generators: vec![jx, jy, jz],
        label: format!("spin:{two_s}"),
    }
}

/// Traceless Hermitian basis of su(d) in the defining representation,
/// orthonormal under `B(X, Y) = 2 Tr(X Y)`: the generalized Gell-Mann
/// matrices scaled by 1/2 (symmetric, antisymmetric, then diagonal family).
pub fn su_basis(d: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(d * d - 1);
    for i in 0..d {
        for j in (i + 1)..d {
            let mut sym = CMatrix::zeros(d, d);
            sym[(i, j)] = C64::new(0.5, 0.0);
            sym[(j, i)] = C64::new(0.5, 0.0);
            out.push(sym);
            let mut asym = CMatrix::zeros(d, d);
            asym[(i, j)] = C64::new(0.0, -0.5);
            asym[(j, i)] = C64::new(0.0, 0.5);
            out.push(asym);
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l as f64 * (l + 1) as f64)).sqrt() / 2.0;
        let mut diag = CMatrix::zeros(d, d);
        for k in 0..l {
            diag[(k, k)] = C64::new(norm, 0.0);
        }
        diag[(l, l)] = C64::new(-(l as f64) * norm, 0.0);
        out.push(diag);
    }
    out
}

fn kron_chain(factors: &[CMatrix]) -> CMatrix {
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = acc.kronecker(f);
    }
    acc
}

/// Local product algebra on a multipartite space: for each factor k, the
/// traceless Hermitian basis of su(d_k) embedded as `1 ⊗ ... ⊗ X ⊗ ... ⊗ 1`.
pub fn local_algebra(dims: &[usize]) -> Result<OperatorBasis> {
    local_algebra_capped(dims, DEFAULT_DIM_CAP)
}

pub fn local_algebra_capped(dims: &[usize], cap: usize) -> Result<OperatorBasis> {
    if dims.is_empty() {
        return Err(Error::InvalidInput("local algebra needs at least one factor".into()));
    }
    if dims.iter().any(|&d| d < 2) {
        return Err(Error::InvalidInput("every local factor must have dimension >= 2".into()));
    }
    let total: usize = dims.iter().product();
    if total > cap {
        return Err(Error::DimensionCap { got: total, cap });
    }

    let mut generators = Vec::new();
    for (k, &d) in dims.iter().enumerate() {
        for x in su_basis(d) {
            let factors: Vec<CMatrix> = dims
                .iter()
                .enumerate()
                .map(|(j, &dj)| if j == k { x.clone() } else { CMatrix::identity(dj, dj) })
                .collect();
            generators.push(kron_chain(&factors));
        }
    }

    let label = format!(
        "local:{}",
        dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("x")
    );
    Ok(OperatorBasis { dim: total, generators, label })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerKind {
    Symmetric,
    Antisymmetric,
}

/// Multi-indices enumerating an orthonormal basis of the symmetric
/// (nondecreasing tuples) or antisymmetric (strictly increasing tuples)
/// subspace of `H^⊗n`, in lexicographic order.
fn subspace_tuples(d: usize, n: usize, kind: PowerKind) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fn rec(
        d: usize,
        n: usize,
        kind: PowerKind,
        start: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for i in start..d {
            current.push(i);
            let next = match kind {
                PowerKind::Symmetric => i,
                PowerKind::Antisymmetric => i + 1,
            };
            rec(d, n, kind, next, current, out);
            current.pop();
        }
    }
    rec(d, n, kind, 0, &mut current, &mut out);
    out
}

fn permutations_with_signs(items: &[usize]) -> Vec<(Vec<usize>, f64)> {
    // Heap's algorithm, tracking parity.
    let mut a = items.to_vec();
    let n = a.len();
    let mut out = vec![(a.clone(), 1.0)];
    let mut c = vec![0usize; n];
    let mut sign = 1.0;
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            sign = -sign;
            out.push((a.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Isometry from the symmetric/antisymmetric subspace into `H^⊗n`, columns
/// indexed by `subspace_tuples` in lexicographic order.
fn subspace_isometry(d: usize, n: usize, kind: PowerKind) -> (CMatrix, usize) {
    let tuples = subspace_tuples(d, n, kind);
    let full = d.pow(n as u32);
    let sub = tuples.len();
    let mut v = CMatrix::zeros(full, sub);
    for (col, tuple) in tuples.iter().enumerate() {
        let perms = permutations_with_signs(tuple);
        match kind {
            PowerKind::Symmetric => {
                // Sum over distinct arrangements of the multiset, each with
                // coefficient 1, then normalize.
                let mut seen: Vec<usize> = Vec::new();
                for (p, _) in &perms {
                    let idx = p.iter().fold(0usize, |acc, &i| acc * d + i);
                    if !seen.contains(&idx) {
                        seen.push(idx);
                    }
                }
                let norm = 1.0 / (seen.len() as f64).sqrt();
                for idx in seen {
                    v[(idx, col)] = C64::new(norm, 0.0);
                }
            }
            PowerKind::Antisymmetric => {
                let norm = 1.0 / (perms.len() as f64).sqrt();
                for (p, sign) in &perms {
                    let idx = p.iter().fold(0usize, |acc, &i| acc * d + i);
                    v[(idx, col)] = C64::new(sign * norm, 0.0);
                }
            }
        }
    }
    (v, sub)
}

/// Induced action on the n-th symmetric or antisymmetric power: each generator
/// X maps to the derivation `Σ_i 1 ⊗ ... ⊗ X ⊗ ... ⊗ 1` restricted to the
/// subspace, expressed in its lexicographic orthonormal basis.
pub fn power_algebra(base: &OperatorBasis, n: usize, kind: PowerKind) -> Result<OperatorBasis> {
    if n == 0 {
        return Err(Error::InvalidInput("power must be positive".into()));
    }
    if kind == PowerKind::Antisymmetric && n > base.dim {
        return Err(Error::InvalidInput(format!(
            "antisymmetric power {n} exceeds base dimension {} (zero space)",
            base.dim
        )));
    }
    if n == 1 {
        return Ok(base.clone());
    }
    let d = base.dim;
    let full = d.checked_pow(n as u32).filter(|&f| f <= DEFAULT_DIM_CAP).ok_or(
        Error::DimensionCap { got: usize::MAX, cap: DEFAULT_DIM_CAP },
    )?;

    let (v, sub) = subspace_isometry(d, n, kind);
    let mut generators = Vec::with_capacity(base.len());
    for x in &base.generators {
        let mut derivation = CMatrix::zeros(full, full);
        for pos in 0..n {
            let factors: Vec<CMatrix> = (0..n)
                .map(|j| if j == pos { x.clone() } else { CMatrix::identity(d, d) })
                .collect();
            derivation += kron_chain(&factors);
        }
        generators.push(v.adjoint() * derivation * &v);
    }

    let tag = match kind {
        PowerKind::Symmetric => "sym",
        PowerKind::Antisymmetric => "wedge",
    };
    Ok(OperatorBasis {
        dim: sub,
        generators,
        label: format!("{tag}:{d}^{n} of {}", base.label),
    })
}

/// Casimir operator `Σ_i X_i²`; scalar on irreducible systems.
pub fn casimir(basis: &OperatorBasis) -> CMatrix {
    let mut c = CMatrix::zeros(basis.dim, basis.dim);
    for x in &basis.generators {
        c += x * x;
    }
    c
}

/// Max entrywise deviation of every generator from Hermitian symmetry.
pub fn hermiticity_residual(basis: &OperatorBasis) -> f64 {
    basis
        .generators
        .iter()
        .map(|x| (x - x.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max))
        .fold(0.0, f64::max)
}
