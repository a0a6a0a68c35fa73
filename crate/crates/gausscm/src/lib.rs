//! Covariance-matrix calculus for zero-mean Gaussian states.
//!
//! Entropies are log-determinants (`M(V) = ½ ln det V`), conditioning is the
//! Schur complement, and quantum validity is `V ≥ iΩ`. Matrices are real
//! `nalgebra::DMatrix<f64>` carrying a list of named parties; the quadratures
//! of each party are laid out either interleaved `(x₁,p₁,x₂,p₂,…)` or blocked
//! `(x₁,x₂,…,p₁,p₂,…)`, see [`QuadratureOrder`].

mod cov;
mod logdet;
pub mod mat;
mod petz;
pub mod random;
mod steer;
mod symplectic;

pub use cov::{CovMatrix, QuadratureOrder};
pub use logdet::{
    cmi_identities, cmi_lower_bound, gaussian_fidelity, gaussian_rel_ent, logdet_cmi, logdet_entropy, logdet_mi,
    ssa_operator_check, CmiBounds, SsaReport,
};
pub use mat::Mat;
pub use petz::{
    gaussian_petz, measurement_update, nondeterministic_apply, petz_recovered, saturation_tests, GaussianChannel,
    SaturationReport,
};
pub use steer::{
    measurement_limit_family, renyi2_eof_bounds, steer_monogamy, steerability, EofBounds, LimitCurve, LimitPoint,
    MonogamyReport,
};
pub use symplectic::{
    g_functions, gamma_sharp, is_qcm, purification, symplectic_eigs, williamson, GValues, QcmReport, Williamson,
};

use thiserror::Error;

/// Symmetry tolerance for input matrices.
pub const SYM_TOL: f64 = 1e-10;

/// Smallest eigenvalue accepted as positive definite.
pub const PD_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaussError {
    #[error("shape: {0}")]
    Shape(String),
    #[error("not positive definite: {0}")]
    NotPositive(String),
    #[error("not a quantum covariance matrix: {0}")]
    NotQcm(String),
    #[error("unknown party {0:?}")]
    UnknownParty(String),
    #[error("singular block: {0}")]
    Singular(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, GaussError>;

/// The 8×8 three-party matrix (A with two modes, B1 and B2 with one each)
/// whose steering from B1B2 to A is less than the sum of the parts.
///
/// The entries are printed to one decimal, and at that precision the matrix
/// has a negative eigenvalue, so it loads through [`CovMatrix::symmetric`].
/// The bundled 8×8 three-party matrix, as JSON.
pub const GMONO8X8_JSON: &str = include_str!("../fixtures/gmono8x8.json");

pub fn gmono8x8() -> CovMatrix {
    CovMatrix::from_json_unchecked(GMONO8X8_JSON).expect("bundled fixture parses")
}
