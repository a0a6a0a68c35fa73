//! Combining binary-input classical-quantum channels.
//!
//! A channel is a pair of output states with a binary input prior. The
//! check-node combination ⊞ and the variable-node combination ⊛ follow the
//! polar-coding conventions, and every entropy is a conditional entropy
//! H(X|B) in nats.

mod bounds;
mod channel;
mod concavity;
mod duality;
mod scan;

pub use bounds::{
    classical_mgl, classical_upper, conjecture_bounds, convolve, gx_lower, qmgl_iid, qmgl_iid_convenient, qmgl_two,
    qmgl_two_terms, ConjectureBounds,
};
pub use channel::{box_combine, channel_entropy, varo_combine, BinaryCqChannel};
pub use concavity::{concavity_bounds, fidelity_entropy_window, ConcavityBounds, FidelityWindow};
pub use duality::{dual_channel, duality_swap_check, DualitySwapReport};
pub use scan::{random_cq_scan, scan_pair, CombineScanRow, PriorMode, SampleKind, ScanSummary};

use numkernel::KernelError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CombineError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Entropy(#[from] entropy::EntropyError),
    #[error("invalid argument: {0}")]
    Argument(String),
}

pub type Result<T> = std::result::Result<T, CombineError>;
