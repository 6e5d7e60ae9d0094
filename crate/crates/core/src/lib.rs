//! Dense stationary iterative solvers with a priori convergence certificates.
//!
//! A system `A x = b` is split as `A = A1 + A2`, giving the fixed-point
//! recurrence `x_m = S x_{m-1} + A1^{-1} b` with iteration matrix
//! `S = -A1^{-1} A2`. Before iterating, [`certify`] decides convergence from
//! the spectrum of `S` (or, for Gauss-Seidel on symmetric positive definite
//! systems, from Reich's sufficient condition). [`iterative`] then runs the
//! recurrence and records a trace against which the certificate's predicted
//! rate can be checked.

pub mod certify;
pub mod complex;
pub mod error;
pub mod iterative;
pub mod linalg;
pub mod mtx;
pub mod poisson;
pub mod report;
pub mod sampling;
pub mod sequences;
pub mod spectral;

pub use complex::ComplexScalar;
pub use error::{Error, Result};
pub use linalg::{DenseMatrix, DenseVector, Matrix, RealMatrix, RealVector, Vector};
