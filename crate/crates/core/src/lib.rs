//! Simulation toolkit for general Gaussification protocols on multimode
//! continuous-variable states.
//!
//! The crate is organised bottom-up:
//!
//! * [`fock`]: dense operators on a truncated multimode Fock basis, ladder and
//!   quadrature operators, beam splitters, displacements, characteristic
//!   functions and Fock-side entanglement measures.
//! * [`gaussian`]: covariance-matrix calculus for Gaussian operators (products
//!   via Schur complements, the protocol fixed point, symplectic spectra,
//!   log-negativity and Wick moments).
//! * [`filter`]: the thermal-form filter family parameterised by `Δ ∈ (0, 1]`.
//! * [`protocol`]: the exact two-copy iteration and multi-round runs with a
//!   per-round ledger.
//! * [`moments`]: normally-ordered moment recursion and the strong-convergence
//!   condition checker.
//! * [`analysis`]: convergence diagnostics, predictions, sweeps, configuration
//!   and machine-readable output.
//!
//! Conventions used everywhere: quadratures are ordered `(X₁, P₁, …, X_m, P_m)`
//! with `X = (a† + a)/√2`, `P = i(a† − a)/√2`; covariance matrices use the
//! anticommutator without a factor ½ so the vacuum has `Γ = 1`; the symplectic
//! form is `Σ = ⊕ [[0, 1], [−1, 0]]`; log-negativities are in bits.

pub mod analysis;
mod error;
pub mod filter;
pub mod fock;
pub mod gaussian;
pub mod linalg;
pub mod moments;
pub mod protocol;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub type CMatrix = nalgebra::DMatrix<Complex64>;
pub type RMatrix = nalgebra::DMatrix<f64>;
pub type CVector = nalgebra::DVector<Complex64>;
