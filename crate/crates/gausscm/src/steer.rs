use numkernel::optim::nelder_mead;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::cov::CovMatrix;
use crate::logdet::{logdet_cmi, logdet_mi};
use crate::mat::{self, Mat};
use crate::symplectic::{gamma_sharp, g_functions, purification, require_qcm, symplectic_eigs, symplectic_eigs_with};
use crate::{GaussError, Result};

fn join<'a>(a: &[&'a str], b: &[&'a str]) -> Vec<&'a str> {
    a.iter().chain(b).copied().collect()
}

/// Gaussian steerability `G(A⟩B) = g₋(V_AB / V_A)` of `steered` by `steering`.
pub fn steerability(v: &CovMatrix, steering: &[&str], steered: &[&str]) -> Result<f64> {
    if steering.is_empty() || steered.is_empty() {
        return Err(GaussError::Argument("steering needs two nonempty groups".into()));
    }
    let w = v.marginal(&join(steering, steered))?;
    Ok(g_functions(&w.schur(steering)?).g_minus)
}

#[derive(Clone, Debug, Serialize)]
pub struct MonogamyReport {
    /// `G(A⟩B₁…B_k)`.
    pub a_steers: f64,
    /// `G(A⟩B_j)` for each j.
    pub a_steers_parts: Vec<f64>,
    /// `G(A⟩B₁…B_k) − Σ G(A⟩B_j)`, nonnegative for every QCM.
    pub a_steers_gap: f64,
    /// `G(B₁…B_k⟩A)`.
    pub a_steered: f64,
    pub a_steered_parts: Vec<f64>,
    /// `G(B₁…B_k⟩A) − Σ G(B_j⟩A)`.
    pub a_steered_gap: f64,
    /// Whether the second gap must be nonnegative: A has one mode or the state is pure.
    pub a_steered_guaranteed: bool,
}

pub fn steer_monogamy(v: &CovMatrix, a: &str, others: &[&str]) -> Result<MonogamyReport> {
    if others.is_empty() {
        return Err(GaussError::Argument("monogamy needs at least one other party".into()));
    }
    let a_steers = steerability(v, &[a], others)?;
    let a_steers_parts = others.iter().map(|b| steerability(v, &[a], &[b])).collect::<Result<Vec<_>>>()?;
    let a_steered = steerability(v, others, &[a])?;
    let a_steered_parts = others.iter().map(|b| steerability(v, &[b], &[a])).collect::<Result<Vec<_>>>()?;
    let n_a = v.marginal(&[a])?.modes();
    let all = v.marginal(&join(&[a], others))?;
    let pure = symplectic_eigs(&all).iter().all(|n| (n - 1.0).abs() < 1e-8);
    Ok(MonogamyReport {
        a_steers_gap: a_steers - a_steers_parts.iter().sum::<f64>(),
        a_steered_gap: a_steered - a_steered_parts.iter().sum::<f64>(),
        a_steers,
        a_steers_parts,
        a_steered,
        a_steered_parts,
        a_steered_guaranteed: n_a == 1 || pure,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EofBounds {
    /// `½ ln det (γ#)_A`.
    pub upper_gamma_sharp: f64,
    /// Smallest `½ ln det γ_A` found over pure `γ ≤ V`.
    pub optimized: f64,
    /// `½ I_M(A:B)`.
    pub half_mi: f64,
    /// `max(G(A⟩B), G(B⟩A))`.
    pub steerability: f64,
    pub hierarchy_ok: bool,
    #[serde(skip)]
    pub gamma: Mat,
}

/// Orthonormal basis of symmetric matrices anticommuting with Ω; their
/// exponentials are the positive symplectic matrices.
fn positive_symplectic_basis(omega: &Mat) -> Vec<Mat> {
    let d = omega.nrows();
    let mut basis: Vec<Mat> = Vec::new();
    for i in 0..d {
        for j in i..d {
            let mut e = Mat::zeros(d, d);
            e[(i, j)] = 1.0;
            e[(j, i)] = 1.0;
            let mut k = (&e - omega * &e * omega.transpose()) * 0.5;
            for b in &basis {
                let c = k.dot(b);
                k -= b * c;
            }
            let n = k.norm();
            if n > 1e-9 {
                basis.push(k / n);
            }
        }
    }
    basis
}

const INFEASIBLE: f64 = 1e3;

/// Rényi-2 Gaussian entanglement of formation bounds for the split a|b.
///
/// Pure states below `V` are searched as `γ = R exp(K) R` with `R = (γ#)^{½}`
/// and `K` in the positive symplectic algebra, by Nelder-Mead from `K = 0`
/// and from `restarts − 1` random feasible points. The result is an upper
/// bound on the true infimum.
pub fn renyi2_eof_bounds(v: &CovMatrix, a: &[&str], b: &[&str], restarts: usize, seed: u64) -> Result<EofBounds> {
    let w = v.marginal(&join(a, b))?;
    require_qcm(&w)?;
    let gs = gamma_sharp(&w)?;
    let a_idx = w.indices(a)?;
    let upper = 0.5 * mat::logdet(&gs.block(a, a)?)?;
    let root = mat::sym_sqrt(gs.mat());
    let basis = positive_symplectic_basis(&w.omega());
    let vm = w.mat().clone();
    let build = |theta: &[f64]| -> Mat {
        let mut k = Mat::zeros(vm.nrows(), vm.ncols());
        for (t, e) in theta.iter().zip(&basis) {
            k += e * *t;
        }
        mat::symmetrize(&(&root * mat::sym_map(&k, f64::exp) * &root))
    };
    let violation = |g: &Mat| (-mat::min_eig(&(&vm - g))).max(0.0);
    let cost = |theta: &[f64]| -> f64 {
        let g = build(theta);
        let viol = violation(&g);
        if viol > 1e-12 {
            return INFEASIBLE + viol;
        }
        match mat::logdet(&mat::sub(&g, &a_idx, &a_idx)) {
            Ok(l) => 0.5 * l,
            Err(_) => INFEASIBLE,
        }
    };
    let dim = basis.len();
    let starts: Vec<Vec<f64>> = (0..restarts.max(1))
        .map(|r| {
            if r == 0 {
                return vec![0.0; dim];
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
            let mut th: Vec<f64> = (0..dim).map(|_| 0.3 * rng.sample::<f64, _>(StandardNormal)).collect();
            for _ in 0..40 {
                if violation(&build(&th)) <= 1e-12 {
                    return th;
                }
                th.iter_mut().for_each(|x| *x *= 0.5);
            }
            vec![0.0; dim]
        })
        .collect();
    let best = starts
        .into_par_iter()
        .map(|x0| nelder_mead(&cost, x0, 0.1, 3000, 1e-13))
        .min_by(|p, q| p.value.total_cmp(&q.value))
        .expect("at least one start");
    let (optimized, gamma) = if best.value < upper { (best.value, build(&best.x)) } else { (upper, gs.mat().clone()) };
    let half_mi = 0.5 * logdet_mi(&w, a, b)?;
    let steer = steerability(&w, a, b)?.max(steerability(&w, b, a)?);
    Ok(EofBounds {
        upper_gamma_sharp: upper,
        optimized,
        half_mi,
        steerability: steer,
        hierarchy_ok: half_mi >= optimized - 1e-6 && optimized >= steer - 1e-6 && optimized <= upper + 1e-9,
        gamma,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitPoint {
    pub t: f64,
    /// Frobenius distance from the post-measurement matrix to the target.
    pub distance: f64,
    /// `max |νᵢ − 1|` of the post-measurement matrix.
    pub output_purity_defect: f64,
    /// `max |νᵢ − 1|` of the measurement seed.
    pub seed_purity_defect: f64,
    /// `½ I_M(A:B|E)` of the purification with the seed added on E.
    pub half_cmi: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitCurve {
    pub points: Vec<LimitPoint>,
    /// `½ I_M(A:B)` of the target, the limit of `half_cmi`.
    pub target_half_mi: f64,
}

fn purity_defect(m: &Mat, omega: &Mat) -> f64 {
    symplectic_eigs_with(m, omega).iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max)
}

/// Measurements on a purifying system E whose post-measurement states on AB
/// approach a pure target `tau ≤ V` as `t → 0⁺`: the seed is
/// `σ(t) = Lᵀ(V − τ(t))⁻¹L − γ_E` with `τ(t) = τ #_t γ#`.
pub fn measurement_limit_family(v: &CovMatrix, a: &[&str], b: &[&str], tau: &Mat, ts: &[f64]) -> Result<LimitCurve> {
    let w = v.marginal(&join(a, b))?;
    let report = require_qcm(&w)?;
    if tau.shape() != w.mat().shape() {
        return Err(GaussError::Shape(format!("target is {:?}, state is {:?}", tau.shape(), w.mat().shape())));
    }
    let omega = w.omega();
    if purity_defect(tau, &omega) > 1e-7 {
        return Err(GaussError::Argument("target is not a pure QCM".into()));
    }
    if mat::min_eig(&(w.mat() - tau)) < -1e-9 {
        return Err(GaussError::Argument("target is not below the state".into()));
    }
    let target = w.with_mat(tau.clone())?;
    let target_half_mi = 0.5 * logdet_mi(&target, a, b)?;
    let nu_min = report.symplectic_eigs[0];
    if report.symplectic_eigs.iter().all(|n| (n - 1.0).abs() < 1e-9) {
        // a pure state only dominates itself
        let distance = (w.mat() - tau).norm();
        let points = ts
            .iter()
            .map(|&t| LimitPoint {
                t,
                distance,
                output_purity_defect: 0.0,
                seed_purity_defect: 0.0,
                half_cmi: target_half_mi,
            })
            .collect();
        return Ok(LimitCurve { points, target_half_mi });
    }
    if nu_min <= 1.0 + 1e-9 {
        return Err(GaussError::Argument("states with both pure and mixed symplectic modes are not supported".into()));
    }
    if let Some(t) = ts.iter().find(|t| !(**t > 0.0 && **t <= 1.0)) {
        return Err(GaussError::Argument(format!("t = {t} outside (0, 1]")));
    }
    let pur = purification(&w)?;
    let e_label = pur.labels().last().expect("purification adds a party").to_string();
    let ab = join(a, b);
    let l = pur.block(&ab, &[&e_label])?;
    let gamma_e = pur.block(&[&e_label], &[&e_label])?;
    let omega_e = pur.marginal(&[&e_label])?.omega();
    let gs = gamma_sharp(&w)?;
    let points = ts
        .iter()
        .map(|&t| {
            let tau_t = mat::weighted_geomean(tau, gs.mat(), t)?;
            let sigma = mat::symmetrize(&(l.transpose() * mat::inverse(&(w.mat() - &tau_t))? * &l - &gamma_e));
            let out = mat::symmetrize(&(w.mat() - &l * mat::inverse(&(&gamma_e + &sigma))? * l.transpose()));
            let mut ext = pur.mat().clone();
            let d = w.dim();
            let mut corner = ext.view_mut((d, d), (sigma.nrows(), sigma.ncols()));
            corner += &sigma;
            let ext = pur.with_mat(ext)?;
            let e = [e_label.as_str()];
            Ok(LimitPoint {
                t,
                distance: (&out - tau).norm(),
                output_purity_defect: purity_defect(&out, &omega),
                seed_purity_defect: purity_defect(&sigma, &omega_e),
                half_cmi: 0.5 * logdet_cmi(&ext, a, b, &e)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitCurve { points, target_half_mi })
}
