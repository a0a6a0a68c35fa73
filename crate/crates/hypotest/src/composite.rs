use entropy::relative_entropy;
use numkernel::{
    eigh, frechet, permute_subsystems, positive_part, psd_pow, tr_prod, CMat, DensityMatrix,
};

use crate::{CompositeSet, ExponentResult, HypoError, Result};

/// Largest tensor-power dimension handed to dense eigensolvers.
const DENSE_CAP: usize = 512;
const PG_TOL: f64 = 1e-7;
const PG_ITERS: usize = 5000;

/// Euclidean projection onto the probability simplex.
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, &x) in u.iter().enumerate() {
        cum += x;
        let t = (cum - 1.0) / (i + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

fn mix(states: &[DensityMatrix], w: &[f64]) -> DensityMatrix {
    let d = states[0].dim();
    let mut m = CMat::zeros(d, d);
    for (s, &x) in states.iter().zip(w) {
        m += s.mat().scale(x);
    }
    DensityMatrix::from_matrix_unchecked(m, states[0].dims().to_vec())
}

fn ln_floor(x: f64) -> f64 {
    x.max(1e-300).ln()
}

/// (1/n) min_μ D(ρ^⊗n ‖ Σᵢ μᵢ σᵢ^⊗n), by projected gradient descent on
/// the simplex.
pub fn composite_stein_finite_n(rho: &DensityMatrix, alt: &CompositeSet, n: usize) -> Result<ExponentResult> {
    if n == 0 {
        return Err(HypoError::Argument("n must be positive".into()));
    }
    if rho.dim() != alt.dim() {
        return Err(numkernel::KernelError::Dimension(format!("{} vs {}", rho.dim(), alt.dim())).into());
    }
    let big = rho.dim().checked_pow(n as u32).filter(|&t| t <= DENSE_CAP).ok_or(HypoError::CapExceeded(
        rho.dim().saturating_pow(n as u32),
        DENSE_CAP,
    ))?;
    debug_assert!(big > 0);
    let rho_n = rho.tensor_pow(n);
    let alts: Vec<DensityMatrix> = alt.states().iter().map(|s| s.tensor_pow(n)).collect();
    let k = alts.len();
    let f = |w: &[f64]| {
        let r = relative_entropy(&rho_n, &mix(&alts, w));
        if r.is_finite() {
            r.value
        } else {
            f64::INFINITY
        }
    };
    let uniform = vec![1.0 / k as f64; k];
    if !f(&uniform).is_finite() {
        return Ok(ExponentResult::infinite());
    }
    // start inside the simplex so the mixture has the full joint support
    let mut w: Vec<f64> = alt.weights().iter().zip(&uniform).map(|(a, b)| 0.5 * (a + b)).collect();
    let mut fw = f(&w);
    let mut step: f64 = 1.0;
    for _ in 0..PG_ITERS {
        let sig = mix(&alts, &w);
        let g = frechet(sig.mat(), rho_n.mat(), ln_floor, |x| 1.0 / x.max(1e-300));
        let grad: Vec<f64> = alts.iter().map(|a| -tr_prod(&g, a.mat())).collect();
        let mut moved = false;
        step = (step * 2.0).min(1e3);
        while step > 1e-14 {
            let cand = project_simplex(&w.iter().zip(&grad).map(|(x, d)| x - step * d).collect::<Vec<_>>());
            let fc = f(&cand);
            let dec: f64 = grad.iter().zip(cand.iter().zip(&w)).map(|(g, (c, x))| g * (x - c)).sum();
            if fc.is_finite() && fc <= fw - 1e-4 * dec.max(0.0) {
                let shift = cand.iter().zip(&w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                moved = shift > PG_TOL;
                w = cand;
                fw = fc;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    let mut res = ExponentResult::finite(fw / n as f64);
    res.weights = Some(w);
    Ok(res)
}

/// D(ρₙ‖σₙ) and D(𝒫_σₙ(ρₙ)‖σₙ) for the spectral pinching of σₙ.
#[derive(Clone, Debug, PartialEq)]
pub struct PinchingGap {
    pub d: f64,
    pub d_pinched: f64,
    /// Number of distinct eigenvalues of σₙ.
    pub spectrum_size: usize,
    /// 0 ≤ D − D_pinched ≤ ln |spec σₙ| (+1e-9).
    pub bound_holds: bool,
}

fn distinct_eigenspaces(vals: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if (v - vals[g[0]]).abs() <= tol * (1.0 + v.abs()) => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
}

/// Checks invariance under every adjacent subsystem swap.
fn permutation_deviation(s: &DensityMatrix) -> Result<f64> {
    let dims = s.dims();
    if dims.iter().any(|&d| d != dims[0]) {
        return Err(HypoError::Argument("subsystems must have equal size".into()));
    }
    let mut dev: f64 = 0.0;
    for i in 0..dims.len().saturating_sub(1) {
        let mut perm: Vec<usize> = (0..dims.len()).collect();
        perm.swap(i, i + 1);
        let p = permute_subsystems(s.mat(), dims, &perm)?;
        dev = dev.max((p - s.mat()).camax());
    }
    Ok(dev)
}

pub fn pinching_gap(rho_n: &DensityMatrix, sigma_n: &DensityMatrix) -> Result<PinchingGap> {
    if rho_n.dim() != sigma_n.dim() {
        return Err(numkernel::KernelError::Dimension(format!("{} vs {}", rho_n.dim(), sigma_n.dim())).into());
    }
    let dev = permutation_deviation(sigma_n)?;
    if dev > numkernel::VALID_TOL {
        return Err(HypoError::NotPermutationInvariant(dev));
    }
    let (vals, u) = eigh(sigma_n.mat());
    let groups = distinct_eigenspaces(&vals, 1e-9);
    let rt = u.adjoint() * rho_n.mat() * &u;
    let mut pinched = CMat::zeros(rt.nrows(), rt.ncols());
    for g in &groups {
        for &i in g {
            for &j in g {
                pinched[(i, j)] = rt[(i, j)];
            }
        }
    }
    let pinched = DensityMatrix::from_matrix_unchecked(&u * pinched * u.adjoint(), rho_n.dims().to_vec());
    let d = relative_entropy(rho_n, sigma_n).value;
    let dp = relative_entropy(&pinched, sigma_n).value;
    let gap = d - dp;
    let bound_holds = if d.is_finite() {
        gap >= -1e-9 && gap <= (groups.len() as f64).ln() + 1e-9
    } else {
        true
    };
    Ok(PinchingGap { d, d_pinched: dp, spectrum_size: groups.len(), bound_holds })
}

/// Errors of the test M = {ρ^⊗n − e^λ σ^⊗n}₊ and the exponential bounds
/// α ≤ e^{(1−s)λ} Q and β ≤ e^{−sλ} Q with Q = Tr (ρ^⊗n)^s (σ^⊗n)^{1−s}.
#[derive(Clone, Debug, PartialEq)]
pub struct AudenaertResult {
    pub type1: f64,
    pub type2: f64,
    pub bound1: f64,
    pub bound2: f64,
    pub bounds_hold: bool,
}

fn check_s(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(HypoError::Argument(format!("s = {s} must lie in (0, 1)")));
    }
    Ok(())
}

fn powers(rho: &DensityMatrix, sigma: &DensityMatrix, n: usize) -> Result<(DensityMatrix, DensityMatrix)> {
    if rho.dim() != sigma.dim() {
        return Err(numkernel::KernelError::Dimension(format!("{} vs {}", rho.dim(), sigma.dim())).into());
    }
    match rho.dim().checked_pow(n as u32) {
        Some(t) if t <= DENSE_CAP => Ok((rho.tensor_pow(n), sigma.tensor_pow(n))),
        _ => Err(HypoError::CapExceeded(rho.dim().saturating_pow(n as u32), DENSE_CAP)),
    }
}

pub fn audenaert_test(rho: &DensityMatrix, sigma: &DensityMatrix, n: usize, s: f64, lambda: f64) -> Result<AudenaertResult> {
    check_s(s)?;
    let (rn, sn) = powers(rho, sigma, n)?;
    let (m, _) = positive_part(&(rn.mat() - sn.mat().scale(lambda.exp())));
    let one = numkernel::identity(m.nrows());
    let type1 = tr_prod(&(&one - &m), rn.mat()).max(0.0);
    let type2 = tr_prod(&m, sn.mat()).max(0.0);
    let q = tr_prod(&psd_pow(rn.mat(), s), &psd_pow(sn.mat(), 1.0 - s));
    let bound1 = ((1.0 - s) * lambda).exp() * q;
    let bound2 = (-s * lambda).exp() * q;
    let slack = 1e-12;
    let bounds_hold = type1 <= bound1 + slack && type2 <= bound2 + slack;
    Ok(AudenaertResult { type1, type2, bound1, bound2, bounds_hold })
}

/// λ = D_s(ρ^⊗n‖σ^⊗n) + ln ε/(1−s), which makes the type-I bound equal ε.
pub fn audenaert_lambda(rho: &DensityMatrix, sigma: &DensityMatrix, n: usize, s: f64, eps: f64) -> Result<f64> {
    check_s(s)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(HypoError::Argument(format!("ε = {eps} must lie in (0, 1)")));
    }
    let (rn, sn) = powers(rho, sigma, n)?;
    let q = tr_prod(&psd_pow(rn.mat(), s), &psd_pow(sn.mat(), 1.0 - s));
    let ds = q.ln() / (s - 1.0);
    Ok(ds + eps.ln() / (1.0 - s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use numkernel::random::random_state;
    use numkernel::{bloch_matrix, diag};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dm(m: CMat) -> DensityMatrix {
        DensityMatrix::from_matrix(m).unwrap()
    }

    #[test]
    fn simplex_projection() {
        let p = project_simplex(&[0.5, 0.9, -0.2]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((p[0] - 0.3).abs() < 1e-12 && (p[1] - 0.7).abs() < 1e-12 && p[2] == 0.0);
    }

    #[test]
    fn singleton_alternative_is_stein() {
        let r = dm(bloch_matrix([0.3, 0.1, 0.5]));
        let s = dm(bloch_matrix([-0.2, 0.4, 0.0]));
        let d = relative_entropy(&r, &s).value;
        let set = CompositeSet::uniform(vec![s]).unwrap();
        for n in 1..=3 {
            let v = composite_stein_finite_n(&r, &set, n).unwrap().value;
            assert!((v - d).abs() < 1e-9, "n={n}: {v} {d}");
        }
    }

    #[test]
    fn member_alternative_gives_zero() {
        let r = dm(bloch_matrix([0.3, 0.1, 0.5]));
        let s = dm(bloch_matrix([-0.2, 0.4, 0.0]));
        let set = CompositeSet::uniform(vec![s, r.clone()]).unwrap();
        for n in 1..=2 {
            let v = composite_stein_finite_n(&r, &set, n).unwrap().value;
            assert!(v.abs() < 1e-7, "{v}");
        }
    }

    #[test]
    fn matches_simplex_grid() {
        let r = dm(bloch_matrix([0.0, 0.0, 0.6]));
        let s1 = dm(bloch_matrix([0.5, 0.0, 0.0]));
        let s2 = dm(bloch_matrix([0.0, 0.5, 0.2]));
        let set = CompositeSet::uniform(vec![s1.clone(), s2.clone()]).unwrap();
        for n in 1..=3 {
            let v = composite_stein_finite_n(&r, &set, n).unwrap().value;
            let (rn, a, b) = (r.tensor_pow(n), s1.tensor_pow(n), s2.tensor_pow(n));
            let mut best = f64::INFINITY;
            for i in 0..=2000 {
                let t = i as f64 / 2000.0;
                let m = mix(&[a.clone(), b.clone()], &[t, 1.0 - t]);
                best = best.min(relative_entropy(&rn, &m).value / n as f64);
            }
            assert!(v <= best + 1e-9 && v >= best - 1e-6, "n={n}: {v} {best}");
        }
    }

    #[test]
    fn unsupported_alternatives_are_infinite() {
        let r = dm(diag(&[0.5, 0.5]));
        let s = dm(diag(&[1.0, 0.0]));
        let set = CompositeSet::uniform(vec![s]).unwrap();
        assert!(composite_stein_finite_n(&r, &set, 2).unwrap().infinite);
    }

    #[test]
    fn pinching_cases() {
        let a = dm(diag(&[0.7, 0.3]));
        let b = dm(diag(&[0.4, 0.6]));
        let g = pinching_gap(&a.tensor_pow(2), &b.tensor_pow(2)).unwrap();
        assert!((g.d - g.d_pinched).abs() < 1e-12);
        let g = pinching_gap(&b.tensor_pow(2), &b.tensor_pow(2)).unwrap();
        assert!(g.d.abs() < 1e-12 && g.d_pinched.abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = random_state(&mut rng, 2).tensor_pow(2);
        let r = random_state(&mut rng, 4).with_dims(vec![2, 2]).unwrap();
        let g = pinching_gap(&r, &s).unwrap();
        assert_eq!(g.spectrum_size, 3);
        assert!(g.bound_holds);
        assert!(g.d - g.d_pinched > 1e-6);
    }

    #[test]
    fn pinching_rejects_asymmetric_sigma() {
        let s = dm(diag(&[0.7, 0.3])).tensor(&dm(diag(&[0.4, 0.6])));
        let r = dm(diag(&[0.25; 4])).with_dims(vec![2, 2]).unwrap();
        assert!(matches!(pinching_gap(&r, &s), Err(HypoError::NotPermutationInvariant(_))));
    }

    #[test]
    fn audenaert_limits_and_recipe() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let r = random_state(&mut rng, 2);
        let s = random_state(&mut rng, 2);
        let lo = audenaert_test(&r, &s, 2, 0.5, -60.0).unwrap();
        assert!(lo.type1 < 1e-12);
        let hi = audenaert_test(&r, &s, 2, 0.5, 60.0).unwrap();
        assert!(hi.type2 < 1e-12);
        let eps = 0.1;
        let lam = audenaert_lambda(&r, &s, 2, 0.5, eps).unwrap();
        let res = audenaert_test(&r, &s, 2, 0.5, lam).unwrap();
        assert!(res.bounds_hold);
        assert!((res.bound1 - eps).abs() < 1e-10);
        assert!(res.type1 <= eps);
    }
}
