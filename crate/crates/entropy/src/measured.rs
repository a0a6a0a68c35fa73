use numkernel::random::haar_unitary;
use numkernel::{c64, eigh, psd_pow, spectral_map, sqrtm, CMat, DensityMatrix};
use rand::Rng;

use crate::{kl, supported, EntropyError, Result};

/// Best basis found for the measured relative entropy.
#[derive(Clone, Debug)]
pub struct MeasuredResult {
    pub value: f64,
    /// Columns are the measurement vectors.
    pub basis: CMat,
    /// Number of starting points tried.
    pub starts: usize,
}

/// Eigenbasis of σ^{-1/2}(σ^{1/2}ρσ^{1/2})^{1/2}σ^{-1/2}. Measuring in it
/// attains the fidelity, so the classical KL in this basis is at least
/// −2 ln F(ρ,σ).
pub fn fuchs_caves_basis(rho: &CMat, sigma: &CMat) -> CMat {
    let sh = sqrtm(sigma);
    let si = psd_pow(sigma, -0.5);
    let m = &si * sqrtm(&(&sh * rho * &sh)) * &si;
    // break degeneracies on the kernel of σ with ρ itself
    let (_, u) = eigh(&(m + rho.scale(1e-7)));
    u
}

fn diag_probs(m: &CMat, u: &CMat) -> (CMat, Vec<f64>) {
    let r = u.adjoint() * m * u;
    let p = (0..r.nrows()).map(|k| r[(k, k)].re.max(0.0)).collect();
    (r, p)
}

fn objective(rho: &CMat, sigma: &CMat, u: &CMat) -> f64 {
    let (_, p) = diag_probs(rho, u);
    let (_, q) = diag_probs(sigma, u);
    kl(&p, &q)
}

/// exp of a skew-Hermitian matrix.
fn expm_skew(a: &CMat) -> CMat {
    let k = a.scale(1.0).map(|z| z * c64(0.0, 1.0)); // K = iA is Hermitian
    spectral_map(&k, |x| c64(x.cos(), -x.sin()))
}

fn ascend(rho: &CMat, sigma: &CMat, mut u: CMat, tol: f64, max_iter: usize) -> (f64, CMat) {
    let d = u.nrows();
    let mut f = objective(rho, sigma, &u);
    let mut step = 1.0;
    for _ in 0..max_iter {
        let (r, p) = diag_probs(rho, &u);
        let (s, q) = diag_probs(sigma, &u);
        let mut m = CMat::zeros(d, d);
        for k in 0..d {
            if p[k] <= 1e-300 || q[k] <= 1e-300 {
                continue;
            }
            let c1 = (p[k] / q[k]).ln() + 1.0;
            let c2 = p[k] / q[k];
            for j in 0..d {
                m[(k, j)] = r[(k, j)] * c1 - s[(k, j)] * c2;
            }
        }
        let a = (m.adjoint() - &m).scale(0.5);
        let g2 = a.norm_squared();
        if g2.sqrt() < tol {
            break;
        }
        let mut accepted = false;
        step *= 2.0;
        while step > 1e-14 {
            let cand = &u * expm_skew(&a.scale(step));
            let fc = objective(rho, sigma, &cand);
            if fc >= f + 1e-4 * step * 2.0 * g2 {
                u = cand;
                f = fc;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (f, u)
}

/// Measured relative entropy over rank-one projective measurements,
/// maximized by gradient ascent on the unitary group from several starts:
/// the Fuchs-Caves basis, the eigenbases of ρ and σ, and `restarts` Haar
/// random bases. Global optimality is not certified.
pub fn measured_relative_entropy<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    restarts: usize,
    tol: f64,
    rng: &mut R,
) -> Result<MeasuredResult> {
    if rho.dim() != sigma.dim() {
        return Err(numkernel::KernelError::Dimension(format!("{} vs {}", rho.dim(), sigma.dim())).into());
    }
    if !supported(rho.mat(), sigma.mat()) {
        return Err(EntropyError::Support);
    }
    let (r, s) = (rho.mat(), sigma.mat());
    let d = rho.dim();
    let mut starts = vec![fuchs_caves_basis(r, s), eigh(r).1, eigh(s).1];
    for _ in 0..restarts {
        starts.push(haar_unitary(rng, d));
    }
    let n = starts.len();
    let mut best: Option<(f64, CMat)> = None;
    for u0 in starts {
        let (f, u) = ascend(r, s, u0, tol, 2000);
        if best.as_ref().is_none_or(|(bf, _)| f > *bf) {
            best = Some((f, u));
        }
    }
    let (value, basis) = best.expect("at least one start");
    Ok(MeasuredResult { value, basis, starts: n })
}
