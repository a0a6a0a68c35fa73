//! Entropic functionals in nats.
//!
//! Divergences never panic on support violations; they return an
//! [`EntropyReport`] with `support_violation` set and an infinite value.

mod binary;
mod divergence;
mod measured;
mod renyi_mi;

pub use binary::{binary_entropy, binary_entropy_inv};
pub use divergence::{
    chernoff_phi, petz_divergence, relative_entropy, sandwiched_divergence, supported, EntropyReport,
};
pub use measured::{fuchs_caves_basis, measured_relative_entropy, MeasuredResult};
pub use renyi_mi::renyi_mutual_information;

use numkernel::{DensityMatrix, KernelError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EntropyError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("support of the first argument is not contained in the support of the second")]
    Support,
    #[error("argument {0} out of range")]
    Range(f64),
    #[error("no convergence after {0} iterations (last change {1:.3e})")]
    NoConvergence(usize, f64),
}

pub type Result<T> = std::result::Result<T, EntropyError>;

/// −Σ λ ln λ over the given spectrum, with 0 ln 0 = 0.
pub fn shannon(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum()
}

/// Classical Kullback-Leibler divergence; infinite when p ≪ q fails.
pub fn kl(p: &[f64], q: &[f64]) -> f64 {
    let mut s = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a > 0.0 {
            if b <= 0.0 {
                return f64::INFINITY;
            }
            s += a * (a / b).ln();
        }
    }
    s
}

pub fn von_neumann(rho: &DensityMatrix) -> f64 {
    shannon(&rho.eigenvalues())
}

fn marginal_entropy(rho: &DensityMatrix, parties: &[usize]) -> Result<f64> {
    if parties.is_empty() {
        return Ok(0.0);
    }
    Ok(von_neumann(&rho.partial_trace(parties)?))
}

fn union(a: &[usize], b: &[usize]) -> Result<Vec<usize>> {
    let mut u = a.to_vec();
    for x in b {
        if u.contains(x) {
            return Err(KernelError::Subsystem(*x).into());
        }
        u.push(*x);
    }
    Ok(u)
}

/// H(A|B) = H(AB) − H(B).
pub fn conditional_entropy(rho: &DensityMatrix, a: &[usize], b: &[usize]) -> Result<f64> {
    Ok(marginal_entropy(rho, &union(a, b)?)? - marginal_entropy(rho, b)?)
}

/// I(A:B) = H(A) + H(B) − H(AB).
pub fn mutual_information(rho: &DensityMatrix, a: &[usize], b: &[usize]) -> Result<f64> {
    Ok(marginal_entropy(rho, a)? + marginal_entropy(rho, b)? - marginal_entropy(rho, &union(a, b)?)?)
}

/// I(A:B|C) = H(AC) + H(BC) − H(ABC) − H(C).
pub fn cqmi(rho: &DensityMatrix, a: &[usize], b: &[usize], c: &[usize]) -> Result<f64> {
    let ac = union(a, c)?;
    let bc = union(b, c)?;
    let abc = union(&ac, b)?;
    Ok(marginal_entropy(rho, &ac)? + marginal_entropy(rho, &bc)?
        - marginal_entropy(rho, &abc)?
        - marginal_entropy(rho, c)?)
}

/// Relative entropy of coherence in the computational basis,
/// H(diag ρ) − H(ρ).
pub fn coherence_relative_entropy(rho: &DensityMatrix) -> f64 {
    let diag: Vec<f64> = rho.mat().diagonal().iter().map(|z| z.re.max(0.0)).collect();
    shannon(&diag) - von_neumann(rho)
}

/// The dephased state diag(ρ).
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let d: Vec<f64> = rho.mat().diagonal().iter().map(|z| z.re).collect();
    DensityMatrix::from_matrix_unchecked(numkernel::diag(&d), rho.dims().to_vec())
}
