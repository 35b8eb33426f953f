//! Seeded random generation of states, unitaries, and directions, shared by
//! the self-test suite and the CLI so that runs are reproducible.

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::repn::{spin_generators, SpinLabel};
use crate::states::PureState;
use crate::{C64, CMatrix, CVector};

pub struct StateSampler {
    rng: ChaCha8Rng,
}

impl StateSampler {
    pub fn new(seed: u64) -> Self {
        StateSampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn complex_gaussian(&mut self) -> C64 {
        C64::new(self.gaussian(), self.gaussian())
    }

    /// Haar-uniform pure state on the factored space.
    pub fn pure_state(&mut self, dims: &[usize]) -> PureState {
        let total: usize = dims.iter().product();
        let amp = CVector::from_fn(total, |_, _| self.complex_gaussian());
        PureState::new_unnormalized(dims.to_vec(), amp)
            .and_then(|s| s.normalized())
            .expect("gaussian state")
    }

    /// Haar-distributed unitary via QR of a complex Gaussian matrix.
    pub fn unitary(&mut self, d: usize) -> CMatrix {
        let g = CMatrix::from_fn(d, d, |_, _| self.complex_gaussian());
        let qr = g.qr();
        let r = qr.r();
        let mut q = qr.q();
        for k in 0..d {
            let rkk = r[(k, k)];
            let phase = if rkk.norm() > 0.0 { rkk / rkk.norm() } else { C64::new(1.0, 0.0) };
            for i in 0..d {
                q[(i, k)] *= phase;
            }
        }
        q
    }

    /// Uniform point on the unit 2-sphere.
    pub fn direction(&mut self) -> Vector3<f64> {
        loop {
            let v = Vector3::new(self.gaussian(), self.gaussian(), self.gaussian());
            let n = v.norm();
            if n > 1e-12 {
                return v / n;
            }
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    /// Random spin-s coherent state: |+s> rotated by a random group element.
    pub fn spin_coherent(&mut self, two_s: usize) -> PureState {
        let basis = spin_generators(SpinLabel::new(two_s));
        let axis = self.direction();
        let theta = self.uniform(0.0, std::f64::consts::TAU);
        let mut direction = CMatrix::zeros(basis.dim, basis.dim);
        for (a, x) in basis.generators.iter().enumerate() {
            direction += x.scale(axis[a]);
        }
        let u = crate::orbit::hermitian_exp(&direction.scale(theta), C64::new(0.0, 1.0));
        let top = PureState::basis_state(vec![basis.dim], &[0]).expect("|+s>");
        top.apply(&u).and_then(|s| s.normalized()).expect("rotated coherent state")
    }
}
