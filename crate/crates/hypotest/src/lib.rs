//! Binary quantum hypothesis testing: Stein, Chernoff and Hoeffding
//! exponents, the discrimination power of a fixed measurement, and exact
//! finite-n error probabilities by enumeration.
//!
//! All exponents are in nats per copy.

mod composite;
mod exponents;
mod finite;
mod power;

pub use composite::{audenaert_lambda, audenaert_test, composite_stein_finite_n, pinching_gap, AudenaertResult, PinchingGap};
pub use exponents::{
    chernoff_exponent, classical_chernoff, classical_hoeffding, classical_phi, classical_stein, hoeffding_exponent,
    min_error_prob, stein_exponent,
};
pub use finite::{adaptive_finite_n, finite_n_error, sequence_probabilities, FiniteNResult, DEFAULT_SEQUENCE_CAP};
pub use power::{covariant_qubit_povm, discrimination_power, mix_povms, stern_gerlach, Mode, PowerOptions};

use numkernel::{DensityMatrix, KernelError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HypoError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Entropy(#[from] entropy::EntropyError),
    #[error("{0} exceeds the configured cap {1}")]
    CapExceeded(usize, usize),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("state is not permutation invariant (deviation {0:.3e})")]
    NotPermutationInvariant(f64),
}

pub type Result<T> = std::result::Result<T, HypoError>;

/// An error exponent with the optimizer data that produced it.
#[derive(Clone, Debug)]
pub struct ExponentResult {
    pub value: f64,
    /// Set when the exponent is +∞ (disjoint supports).
    pub infinite: bool,
    pub argmin_s: Option<f64>,
    /// Optimal state pair for measurement exponents.
    pub witness: Option<(DensityMatrix, DensityMatrix)>,
    /// Whether the witness pair is orthogonal, when there is one.
    pub orthogonal_witness: Option<bool>,
    /// Optimal mixture weights for composite alternatives.
    pub weights: Option<Vec<f64>>,
}

impl ExponentResult {
    pub fn finite(value: f64) -> Self {
        Self { value, infinite: false, argmin_s: None, witness: None, orthogonal_witness: None, weights: None }
    }

    pub fn infinite() -> Self {
        Self { infinite: true, ..Self::finite(f64::INFINITY) }
    }

    fn with_s(mut self, s: f64) -> Self {
        self.argmin_s = Some(s);
        self
    }
}

/// Finitely many states with a probability vector, standing in for a
/// measure on a set of states.
#[derive(Clone, Debug)]
pub struct CompositeSet {
    states: Vec<DensityMatrix>,
    weights: Vec<f64>,
}

impl CompositeSet {
    pub fn new(states: Vec<DensityMatrix>, weights: Vec<f64>) -> Result<Self> {
        if states.is_empty() || states.len() != weights.len() {
            return Err(HypoError::Argument("need one weight per state".into()));
        }
        let d = states[0].dim();
        if states.iter().any(|s| s.dim() != d) {
            return Err(KernelError::Dimension("states of different size".into()).into());
        }
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|&w| w < 0.0) || (total - 1.0).abs() > numkernel::VALID_TOL {
            return Err(HypoError::Argument("weights must be a probability vector".into()));
        }
        Ok(Self { states, weights })
    }

    /// Uniform weights.
    pub fn uniform(states: Vec<DensityMatrix>) -> Result<Self> {
        let k = states.len().max(1);
        Self::new(states, vec![1.0 / k as f64; k])
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }
}
