use entropy::{shannon, von_neumann};
use numkernel::{basis_proj, tensor, tensor_all, CMat, DensityMatrix, LN2};

use crate::{CombineError, Result};

/// Binary-input cq channel x ↦ ρ_x with input prior (p, 1 − p).
#[derive(Clone, Debug)]
pub struct BinaryCqChannel {
    out: [DensityMatrix; 2],
    prior0: f64,
}

impl BinaryCqChannel {
    /// Channel with uniform input prior.
    pub fn new(out0: DensityMatrix, out1: DensityMatrix) -> Result<Self> {
        Self::with_prior(out0, out1, 0.5)
    }

    pub fn with_prior(out0: DensityMatrix, out1: DensityMatrix, prior0: f64) -> Result<Self> {
        if out0.dim() != out1.dim() {
            return Err(CombineError::Argument(format!("output dimensions {} and {} differ", out0.dim(), out1.dim())));
        }
        if !(0.0..=1.0).contains(&prior0) {
            return Err(CombineError::Argument(format!("prior {prior0} outside [0, 1]")));
        }
        Ok(Self { out: [out0, out1], prior0 })
    }

    /// Embedding of a classical channel W(y|x) as diagonal output states.
    pub fn classical(w0: &[f64], w1: &[f64]) -> Result<Self> {
        let mk = |w: &[f64]| DensityMatrix::new(numkernel::diag(w), vec![w.len()]);
        Self::new(mk(w0)?, mk(w1)?)
    }

    /// BSC(p) as a diagonal qubit channel.
    pub fn bsc(p: f64) -> Result<Self> {
        Self::classical(&[1.0 - p, p], &[p, 1.0 - p])
    }

    /// BEC(p) on {0, 1, erasure}.
    pub fn bec(p: f64) -> Result<Self> {
        Self::classical(&[1.0 - p, 0.0, p], &[0.0, 1.0 - p, p])
    }

    pub fn out(&self, x: usize) -> &DensityMatrix {
        &self.out[x]
    }

    pub fn dim(&self) -> usize {
        self.out[0].dim()
    }

    pub fn prior(&self) -> [f64; 2] {
        [self.prior0, 1.0 - self.prior0]
    }

    pub fn is_uniform(&self) -> bool {
        (self.prior0 - 0.5).abs() < 1e-15
    }

    /// Average output state Σ p_x ρ_x.
    pub fn average(&self) -> CMat {
        let p = self.prior();
        self.out[0].mat().scale(p[0]) + self.out[1].mat().scale(p[1])
    }

    /// The cq state Σ p_x |x⟩⟨x| ⊗ ρ_x.
    pub fn cq_state(&self) -> DensityMatrix {
        let p = self.prior();
        let m = tensor(&basis_proj(2, 0), self.out[0].mat()).scale(p[0]) + tensor(&basis_proj(2, 1), self.out[1].mat()).scale(p[1]);
        DensityMatrix::from_matrix_unchecked(m, vec![2, self.dim()])
    }
}

/// H(X|B) = H(p) + Σ p_x H(ρ_x) − H(Σ p_x ρ_x).
pub fn channel_entropy(w: &BinaryCqChannel) -> f64 {
    let p = w.prior();
    let avg = DensityMatrix::from_matrix_unchecked(w.average(), vec![w.dim()]);
    let mut h = shannon(&p) - von_neumann(&avg);
    for (px, rho) in p.iter().zip(&w.out) {
        if *px > 0.0 {
            h += px * von_neumann(rho);
        }
    }
    h.clamp(0.0, LN2)
}

fn check_dims(w1: &BinaryCqChannel, w2: &BinaryCqChannel) -> Result<()> {
    if w1.dim() != w2.dim() {
        return Err(CombineError::Argument(format!("channel output dimensions {} and {} differ", w1.dim(), w2.dim())));
    }
    Ok(())
}

/// W₁ ⊞ W₂: u ↦ Σ_{u₂} P(X₁ = u⊕u₂) P(X₂ = u₂) ρ¹_{u⊕u₂} ⊗ ρ²_{u₂}, normalized;
/// for uniform priors ½ Σ_{u₂} ρ¹_{u⊕u₂} ⊗ ρ²_{u₂}.
pub fn box_combine(w1: &BinaryCqChannel, w2: &BinaryCqChannel) -> Result<BinaryCqChannel> {
    check_dims(w1, w2)?;
    let (p1, p2) = (w1.prior(), w2.prior());
    let d = w1.dim();
    let mut outs = Vec::with_capacity(2);
    let mut q = [0.0; 2];
    for (u, qu) in q.iter_mut().enumerate() {
        let mut m = CMat::zeros(d * d, d * d);
        for u2 in 0..2 {
            let w = p1[u ^ u2] * p2[u2];
            *qu += w;
            m += tensor(w1.out[u ^ u2].mat(), w2.out[u2].mat()).scale(w);
        }
        let m = if *qu > 0.0 { m.unscale(*qu) } else { tensor(w1.out[u].mat(), w2.out[0].mat()) };
        outs.push(DensityMatrix::from_matrix_unchecked(m, vec![d, d]));
    }
    let o1 = outs.pop().expect("two outputs");
    let o0 = outs.pop().expect("two outputs");
    BinaryCqChannel::with_prior(o0, o1, q[0])
}

/// W₁ ⊛ W₂ in the flagged form u₂ ↦ Σ_{u₁} P(X₁ = u₁⊕u₂) |u₁⟩⟨u₁| ⊗ ρ¹_{u₁⊕u₂} ⊗ ρ²_{u₂},
/// where the register holds X₁ + X₂.
pub fn varo_combine(w1: &BinaryCqChannel, w2: &BinaryCqChannel) -> Result<BinaryCqChannel> {
    check_dims(w1, w2)?;
    let p1 = w1.prior();
    let d = w1.dim();
    let out = |u2: usize| -> DensityMatrix {
        let mut m = CMat::zeros(2 * d * d, 2 * d * d);
        for u1 in 0..2 {
            m += tensor_all(&[&basis_proj(2, u1), w1.out[u1 ^ u2].mat(), w2.out[u2].mat()]).scale(p1[u1 ^ u2]);
        }
        DensityMatrix::from_matrix_unchecked(m, vec![2, d, d])
    };
    BinaryCqChannel::with_prior(out(0), out(1), w2.prior0)
}
