//! Exact arithmetic for the double Fock space of type B.
//!
//! The crate has three layers:
//!
//! - combinatorics: the hyperoctahedral group [`coxeter`], type-B set
//!   partitions and their statistics [`partitions`];
//! - operators: truncated double Fock space states and the creation,
//!   annihilation, gauge and Poisson operators [`fock`], together with the
//!   combinatorial moment and Wick formulas [`moments`] that are checked
//!   against direct operator application;
//! - spectra and measures: floating-point eigenvalue and norm checks
//!   [`spectral`], orthogonal polynomials, Jacobi parameters, Cauchy
//!   transforms and the free Meixner density [`orthopoly`].
//!
//! All operator coefficients stay symbolic in the two deformation parameters
//! as sparse [`algebra::BivariatePoly`] values over arbitrary-precision
//! rationals; floating point only enters the spectral and measure layers.

pub mod algebra;
pub mod coxeter;
pub mod error;
pub mod fock;
pub mod moments;
pub mod orthopoly;
pub mod partitions;
pub mod spectral;

pub use algebra::{BivariatePoly, Rational};
pub use error::{Error, Result};
