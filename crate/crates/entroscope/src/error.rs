use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
    #[error("{0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::Io(_) => EXIT_INVALID,
            CliError::Cap(_) => EXIT_CAP,
            CliError::Usage(_) => EXIT_USAGE,
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

macro_rules! invalid_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Invalid(e.to_string())
            }
        }
    )*};
}

invalid_from!(numkernel::KernelError, entropy::EntropyError, combine::CombineError, gausscm::GaussError, csv::Error);

impl From<hypotest::HypoError> for CliError {
    fn from(e: hypotest::HypoError) -> Self {
        match e {
            hypotest::HypoError::CapExceeded(..) => CliError::Cap(e.to_string()),
            e => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<recovery::RecoveryError> for CliError {
    fn from(e: recovery::RecoveryError) -> Self {
        match e {
            recovery::RecoveryError::CapExceeded(..) => CliError::Cap(e.to_string()),
            e => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<polar::PolarError> for CliError {
    fn from(e: polar::PolarError) -> Self {
        match e {
            polar::PolarError::Cap(m) => CliError::Cap(m),
            e => CliError::Invalid(e.to_string()),
        }
    }
}
