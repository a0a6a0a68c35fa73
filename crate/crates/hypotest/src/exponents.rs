use entropy::relative_entropy;
use numkernel::optim::{golden_min, grid_golden_min};
use numkernel::{eigh, trace_norm, DensityMatrix, EIG_TOL};

use crate::{ExponentResult, HypoError, Result};

const S_TOL: f64 = 1e-8;
const GRID: usize = 200;

/// Spectral data for evaluating Tr ρ^s σ^{1−s} at many s without
/// repeating the eigendecompositions.
struct PhiKernel {
    a: Vec<f64>,
    b: Vec<f64>,
    overlap: Vec<Vec<f64>>,
}

impl PhiKernel {
    fn new(rho: &DensityMatrix, sigma: &DensityMatrix) -> Self {
        let (a, u) = eigh(rho.mat());
        let (b, v) = eigh(sigma.mat());
        let w = u.adjoint() * v;
        let overlap = (0..a.len()).map(|i| (0..b.len()).map(|j| w[(i, j)].norm_sqr()).collect()).collect();
        Self { a, b, overlap }
    }

    /// Kernel eigenvalues are dropped, so s = 0 and s = 1 give the
    /// support-projector conventions.
    fn q(&self, s: f64) -> f64 {
        let mut t = 0.0;
        for (i, &a) in self.a.iter().enumerate() {
            if a <= EIG_TOL {
                continue;
            }
            let pa = a.powf(s);
            for (j, &b) in self.b.iter().enumerate() {
                if b > EIG_TOL {
                    t += pa * b.powf(1.0 - s) * self.overlap[i][j];
                }
            }
        }
        t
    }

    fn phi(&self, s: f64) -> f64 {
        let q = self.q(s);
        if q > 0.0 {
            q.ln()
        } else {
            f64::NEG_INFINITY
        }
    }
}

fn check_pair(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(numkernel::KernelError::Dimension(format!("{} vs {}", rho.dim(), sigma.dim())).into());
    }
    Ok(())
}

/// Stein exponent D(ρ‖σ).
pub fn stein_exponent(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<ExponentResult> {
    check_pair(rho, sigma)?;
    let d = relative_entropy(rho, sigma);
    Ok(if d.is_finite() { ExponentResult::finite(d.value) } else { ExponentResult::infinite() })
}

fn chernoff_from_phi(phi: impl Fn(f64) -> f64) -> ExponentResult {
    if phi(0.5) == f64::NEG_INFINITY {
        return ExponentResult::infinite().with_s(0.5);
    }
    // φ is convex on [0, 1]
    let (s, v) = golden_min(&phi, 0.0, 1.0, S_TOL);
    ExponentResult::finite((-v).max(0.0)).with_s(s)
}

/// Quantum Chernoff exponent −min_s φ(s|ρ‖σ).
pub fn chernoff_exponent(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<ExponentResult> {
    check_pair(rho, sigma)?;
    let k = PhiKernel::new(rho, sigma);
    Ok(chernoff_from_phi(|s| k.phi(s)))
}

fn hoeffding_from_phi(phi: impl Fn(f64) -> f64, r: f64, stein: Option<f64>) -> Result<ExponentResult> {
    if !(r >= 0.0) {
        return Err(HypoError::Argument(format!("rate {r} must be non-negative")));
    }
    if phi(0.5) == f64::NEG_INFINITY {
        return Ok(ExponentResult::infinite());
    }
    // s = 1 − e^{-t}; the optimum runs towards s = 1 as r → 0
    let t_max = 9.0 * std::f64::consts::LN_10;
    let obj = |t: f64| {
        let u = (-t).exp();
        let s = 1.0 - u;
        -((-s * r - phi(s)) / u)
    };
    let (t, v) = grid_golden_min(obj, 0.0, t_max, GRID, 1e-10);
    let mut best = ExponentResult::finite((-v).max(0.0)).with_s(1.0 - (-t).exp());
    // the r = 0 supremum is the s → 1 limit
    if r == 0.0 {
        if let Some(d) = stein {
            if d > best.value {
                best = ExponentResult::finite(d).with_s(1.0);
            }
        }
    }
    Ok(best)
}

/// Quantum Hoeffding exponent sup_{0≤s<1} (−s r − φ(s)) / (1 − s).
pub fn hoeffding_exponent(rho: &DensityMatrix, sigma: &DensityMatrix, r: f64) -> Result<ExponentResult> {
    check_pair(rho, sigma)?;
    let k = PhiKernel::new(rho, sigma);
    let d = relative_entropy(rho, sigma);
    hoeffding_from_phi(|s| k.phi(s), r, d.is_finite().then_some(d.value))
}

/// Helstrom minimum error probability with prior p on ρ.
pub fn min_error_prob(rho: &DensityMatrix, sigma: &DensityMatrix, p: f64) -> Result<f64> {
    check_pair(rho, sigma)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(HypoError::Argument(format!("prior {p} outside [0, 1]")));
    }
    let diff = rho.mat().scale(p) - sigma.mat().scale(1.0 - p);
    Ok((0.5 * (1.0 - trace_norm(&diff))).max(0.0))
}

/// Classical φ(s) = ln Σ pₖ^s qₖ^{1−s}, restricted to the common support
/// (so s = 0, 1 follow the support conventions).
pub fn classical_phi(s: f64, p: &[f64], q: &[f64]) -> f64 {
    let t: f64 = p
        .iter()
        .zip(q)
        .filter(|(&a, &b)| a > 0.0 && b > 0.0)
        .map(|(&a, &b)| a.powf(s) * b.powf(1.0 - s))
        .sum();
    if t > 0.0 {
        t.ln()
    } else {
        f64::NEG_INFINITY
    }
}

pub fn classical_chernoff(p: &[f64], q: &[f64]) -> ExponentResult {
    chernoff_from_phi(|s| classical_phi(s, p, q))
}

pub fn classical_stein(p: &[f64], q: &[f64]) -> ExponentResult {
    let d = entropy::kl(p, q);
    if d.is_finite() {
        ExponentResult::finite(d)
    } else {
        ExponentResult::infinite()
    }
}

pub fn classical_hoeffding(p: &[f64], q: &[f64], r: f64) -> Result<ExponentResult> {
    let d = entropy::kl(p, q);
    hoeffding_from_phi(|s| classical_phi(s, p, q), r, d.is_finite().then_some(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use numkernel::random::random_state;
    use numkernel::{bloch_matrix, diag, ket, DensityMatrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dm(m: numkernel::CMat) -> DensityMatrix {
        DensityMatrix::from_matrix(m).unwrap()
    }

    #[test]
    fn equal_states_give_zero() {
        let r = dm(bloch_matrix([0.3, -0.2, 0.5]));
        assert!(stein_exponent(&r, &r).unwrap().value.abs() < 1e-10);
        assert!(chernoff_exponent(&r, &r).unwrap().value.abs() < 1e-10);
        assert!((min_error_prob(&r, &r, 0.5).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn stein_on_diagonal_pair_is_kl() {
        let r = dm(diag(&[0.7, 0.2, 0.1]));
        let s = dm(diag(&[0.2, 0.3, 0.5]));
        let kl = 0.7 * (0.7f64 / 0.2).ln() + 0.2 * (0.2f64 / 0.3).ln() + 0.1 * (0.1f64 / 0.5).ln();
        assert!((stein_exponent(&r, &s).unwrap().value - kl).abs() < 1e-10);
    }

    #[test]
    fn support_violation_flags_infinity() {
        let r = dm(bloch_matrix([0.0, 0.0, 0.5]));
        let s = DensityMatrix::pure(&ket(2, 0), vec![2]).unwrap();
        assert!(stein_exponent(&r, &s).unwrap().infinite);
    }

    #[test]
    fn orthogonal_pure_pair() {
        let a = DensityMatrix::pure(&ket(2, 0), vec![2]).unwrap();
        let b = DensityMatrix::pure(&ket(2, 1), vec![2]).unwrap();
        assert!(chernoff_exponent(&a, &b).unwrap().infinite);
        assert!(min_error_prob(&a, &b, 0.5).unwrap().abs() < 1e-12);
    }

    #[test]
    fn chernoff_matches_scalar_grid() {
        // binary symmetric pair: optimum at s = 1/2
        let e = 0.15;
        let r = dm(diag(&[1.0 - e, e]));
        let s = dm(diag(&[e, 1.0 - e]));
        let res = chernoff_exponent(&r, &s).unwrap();
        let mut best = f64::INFINITY;
        for i in 0..=100_000 {
            let t = i as f64 / 100_000.0;
            let v = ((1.0 - e).powf(t) * e.powf(1.0 - t) + e.powf(t) * (1.0 - e).powf(1.0 - t)).ln();
            best = best.min(v);
        }
        assert!((res.value + best).abs() < 1e-9);
        assert!((res.argmin_s.unwrap() - 0.5).abs() < 1e-6);
        let exact = -(2.0 * (e * (1.0 - e)).sqrt()).ln();
        assert!((res.value - exact).abs() < 1e-12);
    }

    #[test]
    fn hoeffding_at_zero_rate_is_stein() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let r = random_state(&mut rng, 3);
            let s = random_state(&mut rng, 3);
            let d = stein_exponent(&r, &s).unwrap().value;
            let h = hoeffding_exponent(&r, &s, 0.0).unwrap().value;
            assert!((h - d).abs() < 1e-6, "{h} {d}");
            let h_small = hoeffding_exponent(&r, &s, 1e-10).unwrap().value;
            assert!((h_small - d).abs() < 1e-4, "{h_small} {d}");
        }
    }

    #[test]
    fn hoeffding_vanishes_for_large_rate() {
        let r = dm(bloch_matrix([0.2, 0.1, 0.4]));
        let s = dm(bloch_matrix([-0.3, 0.0, 0.1]));
        assert!(hoeffding_exponent(&r, &s, 50.0).unwrap().value < 1e-9);
    }

    #[test]
    fn classical_hoeffding_matches_scalar_oracle() {
        let p = [0.6, 0.3, 0.1];
        let q = [0.2, 0.3, 0.5];
        let r = 0.05;
        let res = classical_hoeffding(&p, &q, r).unwrap();
        let mut best = f64::NEG_INFINITY;
        for i in 0..200_000 {
            let s = i as f64 / 200_000.0;
            let phi: f64 = p.iter().zip(&q).map(|(a, b): (&f64, &f64)| a.powf(s) * b.powf(1.0 - s)).sum::<f64>().ln();
            best = best.max((-s * r - phi) / (1.0 - s));
        }
        assert!((res.value - best).abs() < 1e-8, "{} {}", res.value, best);
        let quantum = hoeffding_exponent(&dm(diag(&p)), &dm(diag(&q)), r).unwrap();
        assert!((quantum.value - best).abs() < 1e-8);
    }

    #[test]
    fn helstrom_matches_eigen_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let r = random_state(&mut rng, 3);
        let s = random_state(&mut rng, 3);
        let p = 0.3;
        let vals = numkernel::eigvalsh(&(r.mat().scale(p) - s.mat().scale(1.0 - p)));
        let pos: f64 = vals.iter().filter(|&&v| v > 0.0).sum();
        // error = p − Σ positive eigenvalues of pρ − (1−p)σ
        let oracle = p - pos;
        assert!((min_error_prob(&r, &s, p).unwrap() - oracle).abs() < 1e-12);
    }
}
