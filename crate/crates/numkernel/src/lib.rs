//! Dense complex linear algebra used by the rest of the workspace.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. Composite systems use
//! big-endian ordering: the first listed subsystem is the slowest index,
//! which is what `DMatrix::kronecker` produces.

mod error;
mod json;
mod linalg;
pub mod optim;
pub mod random;
mod state;

pub use error::KernelError;
pub use json::MatrixJson;
pub use linalg::*;
pub use state::{DensityMatrix, Povm};

pub use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64;

/// Complex dense matrix.
pub type CMat = DMatrix<Complex64>;

/// Eigenvalues at or below this are treated as zero for rank and support.
pub const EIG_TOL: f64 = 1e-10;

/// Tolerance used when validating Hermiticity, trace and effect sums.
pub const VALID_TOL: f64 = 1e-10;

pub const LN2: f64 = std::f64::consts::LN_2;

pub type Result<T> = std::result::Result<T, KernelError>;
