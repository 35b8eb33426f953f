//! Pure states on factored Hilbert spaces, density matrices, reduced
//! (marginal) states, Schmidt decomposition, and entanglement entropy.
//!
//! Amplitudes are indexed row-major over the multi-index with factor 0
//! slowest; this convention is shared with the JSON state files.

use crate::{C64, CMatrix, CVector, Error, Result};

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct PureState {
    dims: Vec<usize>,
    amplitudes: CVector,
}

impl PureState {
    /// A normalized state; rejects vectors whose norm deviates from 1 by more
    /// than 1e-12.
    pub fn new(dims: Vec<usize>, amplitudes: CVector) -> Result<Self> {
        let state = Self::new_unnormalized(dims, amplitudes)?;
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidInput(format!(
                "state not normalized: |psi| = {norm}"
            )));
        }
        Ok(state)
    }

    /// An intermediate (possibly unnormalized) vector, as produced by the
    /// Kempf-Ness flow.
    pub fn new_unnormalized(dims: Vec<usize>, amplitudes: CVector) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || dims.iter().any(|&d| d == 0) {
            return Err(Error::InvalidInput("factor dimensions must be positive".into()));
        }
        if amplitudes.len() != total {
            return Err(Error::DimensionMismatch(format!(
                "amplitude length {} != product of dims {total}",
                amplitudes.len()
            )));
        }
        Ok(PureState { dims, amplitudes })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn factors(&self) -> usize {
        self.dims.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalized(&self) -> Result<PureState> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::InvalidInput("cannot normalize the zero vector".into()));
        }
        Ok(PureState {
            dims: self.dims.clone(),
            amplitudes: self.amplitudes.scale(1.0 / n),
        })
    }

    /// Reinterpret with a different factorization of the same total dimension.
    pub fn refactored(&self, dims: Vec<usize>) -> Result<PureState> {
        Self::new_unnormalized(dims, self.amplitudes.clone())
    }

    /// Computational basis state |i0 i1 ...>.
    pub fn basis_state(dims: Vec<usize>, indices: &[usize]) -> Result<Self> {
        if indices.len() != dims.len() || indices.iter().zip(&dims).any(|(&i, &d)| i >= d) {
            return Err(Error::InvalidInput("basis index out of range".into()));
        }
        let total: usize = dims.iter().product();
        let flat = indices
            .iter()
            .zip(&dims)
            .fold(0usize, |acc, (&i, &d)| acc * d + i);
        let mut amp = CVector::zeros(total);
        amp[flat] = C64::new(1.0, 0.0);
        Self::new(dims, amp)
    }

    /// (|00> + |11>)/sqrt(2) on two qubits.
    pub fn bell() -> Self {
        Self::max_entangled(2)
    }

    /// The maximally entangled state `Σ_i |ii>/sqrt(n)` on dims [n, n].
    pub fn max_entangled(n: usize) -> Self {
        let mut amp = CVector::zeros(n * n);
        let w = C64::new(1.0 / (n as f64).sqrt(), 0.0);
        for i in 0..n {
            amp[i * n + i] = w;
        }
        PureState { dims: vec![n, n], amplitudes: amp }
    }

    /// (|00...0> + |11...1>)/sqrt(2) on n qubits.
    pub fn ghz(n: usize) -> Self {
        let total = 1 << n;
        let mut amp = CVector::zeros(total);
        let w = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amp[0] = w;
        amp[total - 1] = w;
        PureState { dims: vec![2; n], amplitudes: amp }
    }

    /// (|100> + |010> + |001>)/sqrt(3) pattern on n qubits.
    pub fn w_state(n: usize) -> Self {
        let total = 1 << n;
        let mut amp = CVector::zeros(total);
        let w = C64::new(1.0 / (n as f64).sqrt(), 0.0);
        for k in 0..n {
            amp[1 << (n - 1 - k)] = w;
        }
        PureState { dims: vec![2; n], amplitudes: amp }
    }

    /// Apply a matrix acting on the full space.
    pub fn apply(&self, op: &CMatrix) -> Result<PureState> {
        if op.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "operator dimension {} != state dimension {}",
                op.ncols(),
                self.dim()
            )));
        }
        PureState::new_unnormalized(self.dims.clone(), op * &self.amplitudes)
    }
}

#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub dim: usize,
    pub matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim {
            return Err(Error::InvalidInput("density matrix must be square".into()));
        }
        let herm = (&matrix - matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if herm > 1e-12 {
            return Err(Error::InvalidInput(format!("not Hermitian: residual {herm}")));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
            return Err(Error::InvalidInput(format!("trace {} != 1", trace.re)));
        }
        let eigs = nalgebra::SymmetricEigen::new(matrix.clone()).eigenvalues;
        if eigs.iter().any(|l| *l < -1e-10) {
            return Err(Error::InvalidInput("negative eigenvalue beyond tolerance".into()));
        }
        Ok(DensityMatrix { dim, matrix })
    }

    /// Eigenvalues sorted in nonincreasing order, clamped into [0, 1].
    pub fn spectrum(&self) -> Vec<f64> {
        let mut eigs: Vec<f64> = nalgebra::SymmetricEigen::new(self.matrix.clone())
            .eigenvalues
            .iter()
            .map(|l| l.clamp(0.0, 1.0))
            .collect();
        eigs.sort_by(|a, b| b.total_cmp(a));
        eigs
    }
}

#[derive(Debug, Clone)]
pub struct SchmidtData {
    /// Nonincreasing nonnegative coefficients with `Σ c_i² = 1`.
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<CVector>,
    pub right_basis: Vec<CVector>,
}

/// Partial trace over all factors except `factor_index`.
pub fn marginal(state: &PureState, factor_index: usize) -> Result<DensityMatrix> {
    let dims = state.dims();
    if factor_index >= dims.len() {
        return Err(Error::InvalidInput(format!(
            "factor index {factor_index} out of range for {} factors",
            dims.len()
        )));
    }
    let d = dims[factor_index];
    let stride: usize = dims[factor_index + 1..].iter().product();
    let outer: usize = dims[..factor_index].iter().product();
    let inner_block = d * stride;

    let amp = state.amplitudes();
    let mut rho = CMatrix::zeros(d, d);
    for o in 0..outer {
        for r in 0..stride {
            let base = o * inner_block + r;
            for i in 0..d {
                let ai = amp[base + i * stride];
                if ai == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    rho[(i, j)] += ai * amp[base + j * stride].conj();
                }
            }
        }
    }
    DensityMatrix::new(rho)
}

/// Schmidt decomposition of a bipartite state via SVD of the amplitude matrix.
pub fn schmidt(state: &PureState) -> Result<SchmidtData> {
    let dims = state.dims();
    if dims.len() != 2 {
        return Err(Error::InvalidInput(format!(
            "Schmidt decomposition needs exactly 2 factors, got {}",
            dims.len()
        )));
    }
    let (da, db) = (dims[0], dims[1]);
    let amp = state.amplitudes();
    let matrix = CMatrix::from_fn(da, db, |i, j| amp[i * db + j]);

    let svd = matrix.svd(true, true);
    let u = svd.u.as_ref().expect("svd with u");
    let vt = svd.v_t.as_ref().expect("svd with v_t");

    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

    let mut coefficients = Vec::with_capacity(order.len());
    let mut left_basis = Vec::with_capacity(order.len());
    let mut right_basis = Vec::with_capacity(order.len());
    for &k in &order {
        coefficients.push(svd.singular_values[k].max(0.0));
        left_basis.push(CVector::from_iterator(da, u.column(k).iter().cloned()));
        right_basis.push(CVector::from_iterator(db, vt.row(k).iter().cloned()));
    }
    Ok(SchmidtData { coefficients, left_basis, right_basis })
}

/// Entanglement entropy of a bipartite pure state in bits (ebits):
/// `-Σ λ_i log2 λ_i` over the squared Schmidt coefficients.
pub fn entropy(state: &PureState) -> Result<f64> {
    let data = schmidt(state)?;
    let mut e = 0.0;
    for c in &data.coefficients {
        let l = (c * c).clamp(0.0, 1.0);
        if l > 0.0 {
            e -= l * l.log2();
        }
    }
    Ok(e.max(0.0))
}
