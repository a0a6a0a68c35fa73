use numkernel::{CMat, DensityMatrix, Povm};

use crate::{HypoError, Result};

/// Default bound on the number of outcome sequences enumerated.
pub const DEFAULT_SEQUENCE_CAP: usize = 1 << 20;

/// Exact finite-n error with the optimal grouping of outcome sequences.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteNResult {
    pub p_err: f64,
    /// Per sequence (big-endian mixed radix over outcomes): true when the
    /// sequence is assigned to the first hypothesis.
    pub grouping: Vec<bool>,
}

fn check_cap(m: usize, n: usize, cap: usize) -> Result<usize> {
    let mut total: usize = 1;
    for _ in 0..n {
        total = total.checked_mul(m).filter(|&t| t <= cap).ok_or(HypoError::CapExceeded(m.saturating_pow(n as u32), cap))?;
    }
    Ok(total)
}

/// Tr₁[(E ⊗ 1) X] for X on d·rest.
fn contract_first(x: &CMat, e: &CMat, d: usize) -> CMat {
    let rest = x.nrows() / d;
    let mut y = CMat::zeros(rest, rest);
    for i in 0..d {
        for j in 0..d {
            let c = e[(j, i)];
            if c.norm_sqr() == 0.0 {
                continue;
            }
            y += x.view((i * rest, j * rest), (rest, rest)) * c;
        }
    }
    y
}

/// Probabilities of all outcome sequences when the POVM is applied to
/// each of the n subsystems of `state`.
pub fn sequence_probabilities(povm: &Povm, state: &DensityMatrix, n: usize, cap: usize) -> Result<Vec<f64>> {
    let d = povm.dim();
    if d.checked_pow(n as u32) != Some(state.dim()) {
        return Err(numkernel::KernelError::Dimension(format!("state of size {} is not {d}^{n}", state.dim())).into());
    }
    let total = check_cap(povm.len(), n, cap)?;
    let mut out = Vec::with_capacity(total);
    fn rec(povm: &Povm, x: &CMat, d: usize, left: usize, out: &mut Vec<f64>) {
        if left == 0 {
            out.push(x[(0, 0)].re.max(0.0));
            return;
        }
        for e in povm.effects() {
            rec(povm, &contract_first(x, e, d), d, left - 1, out);
        }
    }
    rec(povm, state.mat(), d, n, &mut out);
    Ok(out)
}

fn group(p: &[f64], q: &[f64]) -> FiniteNResult {
    let grouping: Vec<bool> = p.iter().zip(q).map(|(a, b)| a >= b).collect();
    let p_err = 0.5 * p.iter().zip(q).map(|(a, b)| a.min(*b)).sum::<f64>();
    FiniteNResult { p_err, grouping }
}

/// Minimum error (equal priors) of n uses of the POVM on the given pair,
/// each outcome sequence assigned to the likelier hypothesis.
pub fn finite_n_error(
    povm: &Povm,
    rho_n: &DensityMatrix,
    sigma_n: &DensityMatrix,
    n: usize,
    cap: usize,
) -> Result<FiniteNResult> {
    let p = sequence_probabilities(povm, rho_n, n, cap)?;
    let q = sequence_probabilities(povm, sigma_n, n, cap)?;
    Ok(group(&p, &q))
}

/// Exact error (equal priors) of an adaptive protocol: `policy` maps the
/// outcome history to the single-copy pair prepared next.
pub fn adaptive_finite_n(
    povm: &Povm,
    policy: impl Fn(&[usize]) -> (DensityMatrix, DensityMatrix),
    n: usize,
    cap: usize,
) -> Result<f64> {
    check_cap(povm.len(), n, cap)?;
    let mut p = Vec::new();
    let mut q = Vec::new();
    let mut hist = Vec::with_capacity(n);
    #[allow(clippy::too_many_arguments)]
    fn rec(
        povm: &Povm,
        policy: &dyn Fn(&[usize]) -> (DensityMatrix, DensityMatrix),
        n: usize,
        hist: &mut Vec<usize>,
        pp: f64,
        qq: f64,
        p: &mut Vec<f64>,
        q: &mut Vec<f64>,
    ) -> Result<()> {
        if hist.len() == n {
            p.push(pp);
            q.push(qq);
            return Ok(());
        }
        let (r, s) = policy(hist);
        if r.dim() != povm.dim() || s.dim() != povm.dim() {
            return Err(numkernel::KernelError::Dimension("policy state does not match the POVM".into()).into());
        }
        let pr = povm.probabilities(r.mat());
        let ps = povm.probabilities(s.mat());
        for k in 0..povm.len() {
            hist.push(k);
            rec(povm, policy, n, hist, pp * pr[k], qq * ps[k], p, q)?;
            hist.pop();
        }
        Ok(())
    }
    rec(povm, &policy, n, &mut hist, 1.0, 1.0, &mut p, &mut q)?;
    Ok(group(&p, &q).p_err)
}
