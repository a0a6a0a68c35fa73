use numkernel::{eigh, sqrtm, tensor, CMat, DensityMatrix, EIG_TOL, LN2};

use crate::channel::{box_combine, channel_entropy, varo_combine, BinaryCqChannel};
use crate::{CombineError, Result};

/// Dual channel x ↦ σ_x obtained from the isometry |z⟩ ↦ |φ_z⟩|z⟩ fed with
/// conjugate-basis inputs, after tracing out the original output.
///
/// The purifications are |φ_z⟩ = (√ρ_z ⊗ 1)Σᵢ|ii⟩, which gives
/// σ_x = ½ Σ_{z,z'} (−1)^{x(z+z')} (√ρ_{z'} √ρ_z)ᵀ ⊗ |z⟩⟨z'| on R ⊗ Z.
/// Both outputs are then compressed to the support of σ₀ + σ₁.
pub fn dual_channel(w: &BinaryCqChannel) -> Result<BinaryCqChannel> {
    if !w.is_uniform() {
        return Err(CombineError::Argument("dual channels are defined for uniform priors".into()));
    }
    let roots = [sqrtm(w.out(0).mat()), sqrtm(w.out(1).mat())];
    let d = w.dim();
    let sigma = |x: usize| -> CMat {
        let mut m = CMat::zeros(2 * d, 2 * d);
        for z in 0..2 {
            for zp in 0..2 {
                let sign = if (x * (z + zp)) % 2 == 0 { 0.5 } else { -0.5 };
                let block = (&roots[zp] * &roots[z]).transpose();
                let mut e = CMat::zeros(2, 2);
                e[(z, zp)] = numkernel::c64(1.0, 0.0);
                m += tensor(&block, &e).scale(sign);
            }
        }
        numkernel::hermitize(&m)
    };
    let (s0, s1) = (sigma(0), sigma(1));
    let (vals, u) = eigh(&(&s0 + &s1));
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > EIG_TOL).collect();
    let v = CMat::from_fn(2 * d, keep.len(), |r, c| u[(r, keep[c])]);
    let compress = |s: &CMat| DensityMatrix::from_matrix_unchecked(numkernel::hermitize(&(v.adjoint() * s * &v)), vec![keep.len()]);
    BinaryCqChannel::new(compress(&s0), compress(&s1))
}

#[derive(Clone, Copy, Debug)]
pub struct DualitySwapReport {
    /// H(W₁⊥ ⊞ W₂⊥).
    pub box_of_duals: f64,
    /// H((W₁ ⊛ W₂)⊥) = ln 2 − H(W₁ ⊛ W₂).
    pub dual_of_varo: f64,
    /// H(W₁⊥ ⊛ W₂⊥).
    pub varo_of_duals: f64,
    /// H((W₁ ⊞ W₂)⊥) = ln 2 − H(W₁ ⊞ W₂).
    pub dual_of_box: f64,
    pub max_deviation: f64,
}

/// Entropy-level check of W₁⊥ ⊞ W₂⊥ = (W₁ ⊛ W₂)⊥ and W₁⊥ ⊛ W₂⊥ = (W₁ ⊞ W₂)⊥.
pub fn duality_swap_check(w1: &BinaryCqChannel, w2: &BinaryCqChannel) -> Result<DualitySwapReport> {
    let (d1, d2) = (dual_channel(w1)?, dual_channel(w2)?);
    if d1.dim() != d2.dim() {
        // compressed supports can differ; pad the smaller one
        let n = d1.dim().max(d2.dim());
        return duality_swap_check_padded(w1, w2, n);
    }
    report(w1, w2, &d1, &d2)
}

fn pad(w: &BinaryCqChannel, n: usize) -> Result<BinaryCqChannel> {
    let grow = |s: &DensityMatrix| {
        let mut m = CMat::zeros(n, n);
        m.view_mut((0, 0), (s.dim(), s.dim())).copy_from(s.mat());
        DensityMatrix::from_matrix_unchecked(m, vec![n])
    };
    BinaryCqChannel::new(grow(w.out(0)), grow(w.out(1)))
}

fn duality_swap_check_padded(w1: &BinaryCqChannel, w2: &BinaryCqChannel, n: usize) -> Result<DualitySwapReport> {
    let d1 = pad(&dual_channel(w1)?, n)?;
    let d2 = pad(&dual_channel(w2)?, n)?;
    report(w1, w2, &d1, &d2)
}

fn report(w1: &BinaryCqChannel, w2: &BinaryCqChannel, d1: &BinaryCqChannel, d2: &BinaryCqChannel) -> Result<DualitySwapReport> {
    let box_of_duals = channel_entropy(&box_combine(d1, d2)?);
    let varo_of_duals = channel_entropy(&varo_combine(d1, d2)?);
    let dual_of_varo = LN2 - channel_entropy(&varo_combine(w1, w2)?);
    let dual_of_box = LN2 - channel_entropy(&box_combine(w1, w2)?);
    let max_deviation = (box_of_duals - dual_of_varo).abs().max((varo_of_duals - dual_of_box).abs());
    Ok(DualitySwapReport { box_of_duals, dual_of_varo, varo_of_duals, dual_of_box, max_deviation })
}
