use numkernel::random::random_state_mat;
use numkernel::{DensityMatrix, LN2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{classical_mgl, classical_upper, conjecture_bounds, qmgl_two};
use crate::channel::{box_combine, channel_entropy, varo_combine, BinaryCqChannel};
use crate::{CombineError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PriorMode {
    Uniform,
    /// Each channel gets an independent uniform prior P(X = 0) ∈ [0, 1].
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleKind {
    /// T T†/Tr with T a square Ginibre matrix.
    Mixed,
    Pure,
    /// Diagonal states.
    Classical,
}

/// One sampled pair of channels.
#[derive(Clone, Debug, Serialize)]
pub struct CombineScanRow {
    pub prior1: f64,
    pub prior2: f64,
    pub h1: f64,
    pub h2: f64,
    pub h_minus: f64,
    pub h_plus: f64,
    pub classical_mgl: f64,
    pub classical_upper: f64,
    /// Proven two-state bound; only defined for uniform priors.
    pub qmgl_two: Option<f64>,
    pub conj_lower: f64,
    /// H₁ + H₂ − ln 2 + h₂(h₂⁻¹(ln 2 − H₁) ∗ h₂⁻¹(ln 2 − H₂)), evaluated everywhere.
    pub conj_quantum_branch: f64,
    pub violates_proven: bool,
    pub violates_conj_lower: bool,
    pub violates_conj_upper: bool,
}

impl CombineScanRow {
    /// The bound columns by name.
    pub fn bounds(&self) -> Vec<(&'static str, f64)> {
        let mut v = vec![
            ("classical_mgl", self.classical_mgl),
            ("classical_upper", self.classical_upper),
            ("conj_lower", self.conj_lower),
            ("conj_quantum_branch", self.conj_quantum_branch),
        ];
        if let Some(q) = self.qmgl_two {
            v.push(("qmgl_two", q));
        }
        v
    }
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct ScanSummary {
    pub count: usize,
    pub proven_violations: usize,
    pub conj_lower_violations: usize,
    pub conj_upper_violations: usize,
    /// Largest |H₋ + H₊ − H₁ − H₂|.
    pub max_chain_deviation: f64,
}

const PROVEN_TOL: f64 = 1e-7;
const CONJ_TOL: f64 = 1e-9;

fn sample_state<R: Rng + ?Sized>(rng: &mut R, d: usize, kind: SampleKind) -> DensityMatrix {
    let m = match kind {
        SampleKind::Mixed => random_state_mat(rng, d, d),
        SampleKind::Pure => random_state_mat(rng, d, 1),
        SampleKind::Classical => {
            let w: Vec<f64> = (0..d).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
            let s: f64 = w.iter().sum();
            numkernel::diag(&w.iter().map(|x| x / s).collect::<Vec<_>>())
        }
    };
    DensityMatrix::from_matrix_unchecked(m, vec![d])
}

fn sample_channel<R: Rng + ?Sized>(rng: &mut R, d: usize, kind: SampleKind, prior: PriorMode) -> Result<BinaryCqChannel> {
    let p = match prior {
        PriorMode::Uniform => 0.5,
        PriorMode::Random => rng.random::<f64>(),
    };
    BinaryCqChannel::with_prior(sample_state(rng, d, kind), sample_state(rng, d, kind), p)
}

/// Evaluates every bound on one pair of channels.
pub fn scan_pair(w1: &BinaryCqChannel, w2: &BinaryCqChannel) -> Result<CombineScanRow> {
    let h1 = channel_entropy(w1);
    let h2 = channel_entropy(w2);
    let h_minus = channel_entropy(&box_combine(w1, w2)?);
    let h_plus = channel_entropy(&varo_combine(w1, w2)?);
    let conj = conjecture_bounds(h1, h2)?;
    let qmgl = if w1.is_uniform() && w2.is_uniform() { Some(qmgl_two(h1, h2)?) } else { None };
    Ok(CombineScanRow {
        prior1: w1.prior()[0],
        prior2: w2.prior()[0],
        h1,
        h2,
        h_minus,
        h_plus,
        classical_mgl: classical_mgl(h1, h2)?,
        classical_upper: classical_upper(h1, h2)?,
        qmgl_two: qmgl,
        conj_lower: conj.lower,
        conj_quantum_branch: h1 + h2 - LN2 + classical_mgl(LN2 - h1, LN2 - h2)?,
        violates_proven: qmgl.is_some_and(|q| h_minus < q - PROVEN_TOL),
        violates_conj_lower: h_minus < conj.lower - CONJ_TOL,
        violates_conj_upper: h_minus > conj.upper + CONJ_TOL,
    })
}

/// Samples `count` independent channel pairs and tabulates H(W₁ ⊞ W₂)
/// against all bounds. Sample i uses stream i of a ChaCha generator seeded
/// with `seed`, so results do not depend on the thread count.
pub fn random_cq_scan(
    count: usize,
    dim: usize,
    prior: PriorMode,
    kind: SampleKind,
    seed: u64,
) -> Result<(Vec<CombineScanRow>, ScanSummary)> {
    if dim < 1 {
        return Err(CombineError::Argument("dimension must be positive".into()));
    }
    let rows: Vec<CombineScanRow> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let w1 = sample_channel(&mut rng, dim, kind, prior)?;
            let w2 = sample_channel(&mut rng, dim, kind, prior)?;
            scan_pair(&w1, &w2)
        })
        .collect::<Result<_>>()?;
    let mut s = ScanSummary { count, ..Default::default() };
    for r in &rows {
        s.proven_violations += r.violates_proven as usize;
        s.conj_lower_violations += r.violates_conj_lower as usize;
        s.conj_upper_violations += r.violates_conj_upper as usize;
        s.max_chain_deviation = s.max_chain_deviation.max((r.h_minus + r.h_plus - r.h1 - r.h2).abs());
    }
    Ok((rows, s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn proven_bound_is_never_violated() {
        let (_, s) = random_cq_scan(10_000, 2, PriorMode::Uniform, SampleKind::Mixed, 1).unwrap();
        assert_eq!(s.proven_violations, 0);
        assert!(s.max_chain_deviation < 1e-8);
    }

    #[test]
    fn pure_pairs_sit_on_the_quantum_branch() {
        let (rows, s) = random_cq_scan(300, 2, PriorMode::Uniform, SampleKind::Pure, 2).unwrap();
        for r in &rows {
            assert!((r.h_minus - r.conj_quantum_branch).abs() < 1e-6, "{r:?}");
        }
        assert_eq!(s.conj_lower_violations, 0);
    }

    #[test]
    fn bsc_pairs_meet_the_classical_lemma() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let w1 = BinaryCqChannel::bsc(rng.random_range(0.0..0.5)).unwrap();
            let w2 = BinaryCqChannel::bsc(rng.random_range(0.0..0.5)).unwrap();
            let r = scan_pair(&w1, &w2).unwrap();
            assert!((r.h_minus - r.classical_mgl).abs() < 1e-10);
        }
        let (rows, _) = random_cq_scan(500, 3, PriorMode::Random, SampleKind::Classical, 4).unwrap();
        assert!(rows.iter().all(|r| r.h_minus >= r.classical_mgl - 1e-9 && r.h_minus <= r.classical_upper + 1e-9));
    }

    #[test]
    fn scan_is_reproducible() {
        let a = random_cq_scan(20, 2, PriorMode::Random, SampleKind::Mixed, 5).unwrap().0;
        let b = random_cq_scan(20, 2, PriorMode::Random, SampleKind::Mixed, 5).unwrap().0;
        assert!(a.iter().zip(&b).all(|(x, y)| x.h_minus == y.h_minus));
    }
}
