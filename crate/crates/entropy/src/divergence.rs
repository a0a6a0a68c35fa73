use numkernel::{identity, logm, psd_pow, support_proj, tr_prod, CMat, DensityMatrix};

use crate::{EntropyError, Result};

/// A divergence value together with the infinite-support flag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyReport {
    pub value: f64,
    pub support_violation: bool,
}

impl EntropyReport {
    pub fn finite(value: f64) -> Self {
        Self { value, support_violation: false }
    }

    pub fn infinite() -> Self {
        Self { value: f64::INFINITY, support_violation: true }
    }

    pub fn is_finite(&self) -> bool {
        !self.support_violation
    }
}

/// Weight of ρ outside the support of σ.
const SUPPORT_TOL: f64 = 1e-10;

/// supp ρ ⊆ supp σ, tested as Tr[ρ (1 − Π_σ)] ≤ 1e-10.
pub fn supported(rho: &CMat, sigma: &CMat) -> bool {
    let out = identity(sigma.nrows()) - support_proj(sigma);
    tr_prod(&out, rho) <= SUPPORT_TOL
}

fn check_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(numkernel::KernelError::Dimension(format!("{} vs {}", rho.dim(), sigma.dim())).into());
    }
    Ok(())
}

/// Umegaki relative entropy Tr ρ(ln ρ − ln σ).
///
/// # Panics
/// Panics if the two states have different sizes.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> EntropyReport {
    check_dims(rho, sigma).expect("relative_entropy: dimension mismatch");
    if !supported(rho.mat(), sigma.mat()) {
        return EntropyReport::infinite();
    }
    let v = -crate::von_neumann(rho) - tr_prod(rho.mat(), &logm(sigma.mat()));
    EntropyReport::finite(v.max(0.0))
}

/// Tr ρ^s σ^{1−s}. Zero powers are support projectors.
fn petz_q(rho: &CMat, sigma: &CMat, s: f64) -> f64 {
    tr_prod(&psd_pow(rho, s), &psd_pow(sigma, 1.0 - s))
}

/// Chernoff quantity φ(s) = ln Tr ρ^s σ^{1−s}; −∞ when the trace vanishes.
pub fn chernoff_phi(s: f64, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(EntropyError::Range(s));
    }
    check_dims(rho, sigma)?;
    let q = petz_q(rho.mat(), sigma.mat(), s);
    Ok(if q > 0.0 { q.ln() } else { f64::NEG_INFINITY })
}

fn check_order(s: f64) -> Result<()> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(EntropyError::Range(s));
    }
    Ok(())
}

/// Petz Rényi divergence (1/(s−1)) ln Tr ρ^s σ^{1−s}. At s = 1 the
/// relative entropy is returned.
pub fn petz_divergence(rho: &DensityMatrix, sigma: &DensityMatrix, s: f64) -> Result<EntropyReport> {
    check_order(s)?;
    check_dims(rho, sigma)?;
    if s == 1.0 {
        return Ok(relative_entropy(rho, sigma));
    }
    if s > 1.0 && !supported(rho.mat(), sigma.mat()) {
        return Ok(EntropyReport::infinite());
    }
    let q = petz_q(rho.mat(), sigma.mat(), s);
    if q <= 0.0 {
        return Ok(EntropyReport::infinite());
    }
    Ok(EntropyReport::finite(q.ln() / (s - 1.0)))
}

/// Sandwiched Rényi divergence (1/(s−1)) ln Tr[(σ^{(1−s)/2s} ρ σ^{(1−s)/2s})^s].
pub fn sandwiched_divergence(rho: &DensityMatrix, sigma: &DensityMatrix, s: f64) -> Result<EntropyReport> {
    check_order(s)?;
    check_dims(rho, sigma)?;
    if s == 1.0 {
        return Ok(relative_entropy(rho, sigma));
    }
    if s > 1.0 && !supported(rho.mat(), sigma.mat()) {
        return Ok(EntropyReport::infinite());
    }
    let w = psd_pow(sigma.mat(), (1.0 - s) / (2.0 * s));
    let inner = &w * rho.mat() * &w;
    let q: f64 = numkernel::eigvalsh(&inner).iter().filter(|&&x| x > 0.0).map(|&x| x.powf(s)).sum();
    if q <= 0.0 {
        return Ok(EntropyReport::infinite());
    }
    Ok(EntropyReport::finite(q.ln() / (s - 1.0)))
}
