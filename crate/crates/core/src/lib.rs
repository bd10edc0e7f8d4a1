//! Rational R- and K-matrices for `sl(n)`: reflection-equation residuals,
//! order-by-order solving, involution extraction and classification of the
//! residual symmetry algebra.

pub mod address;
pub mod classify;
pub mod error;
pub mod io;
pub mod kmatrix;
pub mod lie;
pub mod linalg;
pub mod rmatrix;
pub mod series;
pub mod spectral;

pub use error::{Error, Result};
pub use linalg::{CMat, CVec, Cutoff};

/// Singular-value cutoff for kernels: `max(rows, cols) · ε · σ_max`.
pub const KERNEL_CUTOFF: Cutoff = Cutoff::Machine;

/// Default absolute tolerance on Frobenius-norm residuals.
pub const DEFAULT_TOL: f64 = 1e-10;
