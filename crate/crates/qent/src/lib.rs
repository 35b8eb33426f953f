//! Entanglement classification and quantification for finite-dimensional pure
//! quantum states relative to a declared dynamical symmetry group.
//!
//! The library builds Hermitian operator bases for the supported system
//! families (spin irreps, local product algebras, symmetric and antisymmetric
//! powers), evaluates total-variance and coherence tests, runs the Kempf-Ness
//! gradient flow over the complexified group to compute the generalized
//! concurrence and stability class, evaluates closed-form invariants
//! (determinant concurrence, Cayley hyperdeterminant, 3-tangle), handles the
//! Majorana root picture of spin states, and evaluates the pentagram and CHSH
//! Bell functionals.

pub mod bell;
pub mod error;
pub mod fluct;
pub mod invariants;
pub mod io;
pub mod majorana;
pub mod orbit;
pub mod random;
pub mod repn;
pub mod selftest;
pub mod states;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex vector.
pub type CVector = nalgebra::DVector<C64>;
