//! Polarization of binary-input cq channels.
//!
//! Channels are held as an erasure probability, a merged classical likelihood
//! table, or block-diagonal dense outputs. Combining two channels picks the
//! cheapest representation that holds both operands exactly.

mod channel;
mod functional;
mod run;

pub use channel::{synthesize, ClassicalChannel, DenseChannel, Limits, Representation, SynthesizedChannel};
pub use functional::{entropy_gap, kappa_floor, t_functional_run, GapReport, TRun};
pub use run::{nonstationary_run, nonstationary_step, polarization_run, PolarRun, PolarStats};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolarError {
    #[error(transparent)]
    Combine(#[from] combine::CombineError),
    #[error("size limit: {0}")]
    Cap(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, PolarError>;
