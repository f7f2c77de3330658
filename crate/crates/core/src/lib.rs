//! Sum-of-variances uncertainty relations for finite-dimensional observables.
//!
//! The crate computes the classical product bounds (Heisenberg–Robertson and
//! Schrödinger) next to the stronger sum-of-variances relations, constructs the
//! orthogonal states `|ψ⊥⟩` that parametrize them (including the closed-form
//! choices that turn them into equalities), and runs seeded randomized
//! campaigns that check every inequality and identity numerically.
//!
//! Module map:
//!
//! * [`linalg`]: small dense complex matrices, Householder QR, Hermitian
//!   Jacobi eigensolver.
//! * [`quantum`]: validated states, observables and density matrices, plus
//!   expectations, variances, commutators and the Vaidman decomposition.
//! * [`perp`]: constructions of states orthogonal to `|ψ⟩`.
//! * [`random`]: seeded Haar unitaries, random states and GUE observables.
//! * [`spin`]: angular-momentum matrices for arbitrary spin.
//! * [`bounds`]: every bound, packaged into a [`bounds::BoundReport`].
//! * [`experiments`]: the spin-1 φ sweep, verification and saturation
//!   campaigns, and their CSV / JSON / gnuplot writers.
//!
//! Conventions: `ħ = 1`; the commutator expectation of two Hermitian
//! operators is purely imaginary and is carried around as the real number
//! `c` with `⟨[A,B]⟩ = i·c` (see [`quantum::commutator_mean`]).

pub mod bounds;
pub mod config;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod perp;
pub mod quantum;
pub mod random;
pub mod spin;

pub use num_complex::Complex64 as C64;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use perp::{PerpStrategy, SignChoice};
pub use quantum::{DensityMatrix, HermitianOperator, StateVector, VaidmanDecomposition};
pub use random::SeededRng;
pub use spin::SpinTriple;
