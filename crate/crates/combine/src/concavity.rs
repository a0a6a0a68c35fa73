use entropy::{binary_entropy_inv, relative_entropy, shannon, von_neumann};
use numkernel::{basis_proj, fidelity_mat, sqrtm, tensor, tr_prod, CMat, DensityMatrix, LN2};

use crate::channel::{channel_entropy, BinaryCqChannel};
use crate::{CombineError, Result};

#[derive(Clone, Copy, Debug)]
pub struct ConcavityBounds {
    /// H(Σ pᵢρᵢ) − Σ pᵢ H(ρᵢ).
    pub lhs: f64,
    /// H({p}) − D(Σ √(pᵢpⱼ)|i⟩⟨j| ⊗ √ρᵢ√ρⱼ ‖ Σ pᵢ|i⟩⟨i| ⊗ ρᵢ).
    pub eqform: f64,
    /// H({p}) − ln(1 + 2 Σ_{i<j} √(pᵢpⱼ) tr[√ρᵢ√ρⱼ]).
    pub lb_sqrt: f64,
    /// Same with tr[√ρᵢ√ρⱼ] replaced by F(ρᵢ, ρⱼ).
    pub lb_fid: f64,
}

/// Entropy gap of a mixture, its exact relative-entropy form, and the two
/// lower bounds obtained from it.
pub fn concavity_bounds(states: &[DensityMatrix], probs: &[f64]) -> Result<ConcavityBounds> {
    if states.is_empty() || states.len() != probs.len() {
        return Err(CombineError::Argument("need one probability per state".into()));
    }
    let d = states[0].dim();
    if states.iter().any(|s| s.dim() != d) {
        return Err(CombineError::Argument("states must share one dimension".into()));
    }
    if probs.iter().any(|&p| p < 0.0) || (probs.iter().sum::<f64>() - 1.0).abs() > 1e-10 {
        return Err(CombineError::Argument("probabilities must be nonnegative and sum to one".into()));
    }
    let n = states.len();
    let mut mix = CMat::zeros(d, d);
    let mut avg_h = 0.0;
    for (s, &p) in states.iter().zip(probs) {
        mix += s.mat().scale(p);
        avg_h += p * von_neumann(s);
    }
    let lhs = von_neumann(&DensityMatrix::from_matrix_unchecked(mix, vec![d])) - avg_h;

    let roots: Vec<CMat> = states.iter().map(|s| sqrtm(s.mat())).collect();
    let mut big = CMat::zeros(n * d, n * d);
    let mut diag = CMat::zeros(n * d, n * d);
    for i in 0..n {
        diag += tensor(&basis_proj(n, i), states[i].mat()).scale(probs[i]);
        for j in 0..n {
            let mut e = CMat::zeros(n, n);
            e[(i, j)] = numkernel::c64(1.0, 0.0);
            big += tensor(&e, &(&roots[i] * &roots[j])).scale((probs[i] * probs[j]).sqrt());
        }
    }
    let hp = shannon(probs);
    let dims = vec![n, d];
    let d_rel = relative_entropy(
        &DensityMatrix::from_matrix_unchecked(numkernel::hermitize(&big), dims.clone()),
        &DensityMatrix::from_matrix_unchecked(diag, dims),
    );
    let eqform = if d_rel.is_finite() { hp - d_rel.value } else { f64::NEG_INFINITY };

    let mut s_tr = 0.0;
    let mut s_f = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let w = (probs[i] * probs[j]).sqrt();
            s_tr += w * tr_prod(&roots[i], &roots[j]);
            s_f += w * fidelity_mat(states[i].mat(), states[j].mat());
        }
    }
    Ok(ConcavityBounds { lhs, eqform, lb_sqrt: hp - (1.0 + 2.0 * s_tr).ln(), lb_fid: hp - (1.0 + 2.0 * s_f).ln() })
}

#[derive(Clone, Copy, Debug)]
pub struct FidelityWindow {
    pub f: f64,
    pub h: f64,
    pub lower: f64,
    pub upper: f64,
    /// e^H − 1 ≤ f ≤ 1 − 2h₂⁻¹(ln 2 − H) within 1e-9.
    pub ok: bool,
}

/// Window for the fidelity of a pair in terms of its channel entropy.
pub fn fidelity_entropy_window(s0: &DensityMatrix, s1: &DensityMatrix) -> Result<FidelityWindow> {
    let w = BinaryCqChannel::new(s0.clone(), s1.clone())?;
    let h = channel_entropy(&w);
    let f = fidelity_mat(s0.mat(), s1.mat()).min(1.0);
    let lower = h.exp() - 1.0;
    let upper = 1.0 - 2.0 * binary_entropy_inv((LN2 - h).max(0.0))?;
    Ok(FidelityWindow { f, h, lower, upper, ok: lower <= f + 1e-9 && f <= upper + 1e-9 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use entropy::binary_entropy;
    use numkernel::random::random_state;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pure(theta: f64) -> DensityMatrix {
        DensityMatrix::new(numkernel::bloch_matrix([theta.sin(), 0.0, theta.cos()]), vec![2]).unwrap()
    }

    #[test]
    fn orthogonal_and_identical_states() {
        let s = [pure(0.0), pure(std::f64::consts::PI)];
        let b = concavity_bounds(&s, &[0.3, 0.7]).unwrap();
        let hp = shannon(&[0.3, 0.7]);
        for v in [b.lhs, b.eqform, b.lb_sqrt, b.lb_fid] {
            assert!((v - hp).abs() < 1e-8, "{b:?}");
        }
        let s = [pure(0.4), pure(0.4)];
        let b = concavity_bounds(&s, &[0.5, 0.5]).unwrap();
        assert!(b.lhs.abs() < 1e-10 && b.eqform.abs() < 1e-8);
        assert!(b.lb_sqrt.abs() < 1e-10 && b.lb_fid.abs() < 1e-10);
        let b = concavity_bounds(&s, &[0.2, 0.8]).unwrap();
        assert!(b.lb_fid <= 1e-12);
    }

    #[test]
    fn ordering_on_random_trios() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let s: Vec<DensityMatrix> = (0..3).map(|_| random_state(&mut rng, 2)).collect();
            let b = concavity_bounds(&s, &[0.2, 0.3, 0.5]).unwrap();
            assert!((b.lhs - b.eqform).abs() < 1e-8, "{b:?}");
            assert!(b.eqform >= b.lb_sqrt - 1e-9);
            assert!(b.lb_sqrt >= b.lb_fid - 1e-9);
        }
    }

    #[test]
    fn fidelity_window() {
        let s = pure(0.7);
        let w = fidelity_entropy_window(&s, &s).unwrap();
        assert!((w.f - 1.0).abs() < 1e-12 && (w.h - LN2).abs() < 1e-12 && w.ok);
        assert!((w.lower - 1.0).abs() < 1e-12 && (w.upper - 1.0).abs() < 1e-12);
        let w = fidelity_entropy_window(&pure(0.0), &pure(std::f64::consts::PI)).unwrap();
        assert!(w.f.abs() < 1e-12 && w.h.abs() < 1e-12 && w.ok);
        // pure pair with overlap 0.4: H = ln 2 − h₂((1 − f)/2), upper end tight
        let theta = 2.0 * 0.4f64.acos();
        let w = fidelity_entropy_window(&pure(0.0), &pure(theta)).unwrap();
        assert!((w.f - 0.4).abs() < 1e-12);
        assert!((w.h - (LN2 - binary_entropy(0.3).unwrap())).abs() < 1e-12);
        assert!((w.upper - w.f).abs() < 1e-9 && w.ok);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            assert!(fidelity_entropy_window(&random_state(&mut rng, 3), &random_state(&mut rng, 3)).unwrap().ok);
        }
    }
}
