use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("trace is {0}, expected 1")]
    Trace(f64),
    #[error("effects sum to identity only within {0:.3e}")]
    NotComplete(f64),
    #[error("subsystem index {0} out of range")]
    Subsystem(usize),
    #[error("invalid matrix data: {0}")]
    Format(String),
}
