use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use combine::qmgl_two;
use numkernel::LN2;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{Limits, SynthesizedChannel};
use crate::{PolarError, Result};

const FLOOR_GRID: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapReport {
    /// I(⟨W₁,W₂⟩⁺) − I(⟨W₁,W₂⟩⁻) − |I(W₁) − I(W₂)|.
    pub gap: f64,
    /// 2(H(W₁ ⊞ W₂) − max(H₁, H₂)).
    pub gap_from_box: f64,
    /// Pointwise lower bound 2(qmgl(H₁, H₂) − max(H₁, H₂)).
    pub pointwise_floor: f64,
    /// Minimum of the pointwise bound over the band a ≤ I₁, I₂ ≤ b.
    pub kappa_floor: f64,
    pub in_band: bool,
}

fn bound_gap(h1: f64, h2: f64) -> Result<f64> {
    Ok(2.0 * (qmgl_two(h1, h2)? - h1.max(h2)))
}

/// Smallest value of the pointwise bound with both informations in [a, b], on a grid.
pub fn kappa_floor(a: f64, b: f64) -> Result<f64> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (a.to_bits(), b.to_bits());
    if let Some(v) = cache.lock().expect("floor cache").get(&key) {
        return Ok(*v);
    }
    let v = grid_floor(a, b)?;
    cache.lock().expect("floor cache").insert(key, v);
    Ok(v)
}

fn grid_floor(a: f64, b: f64) -> Result<f64> {
    if !(0.0 <= a && a < b && b <= LN2) {
        return Err(PolarError::Argument(format!("need 0 ≤ a < b ≤ ln2, got a = {a}, b = {b}")));
    }
    let (lo, hi) = (LN2 - b, LN2 - a);
    let pts: Vec<f64> = (0..=FLOOR_GRID).map(|i| lo + (hi - lo) * i as f64 / FLOOR_GRID as f64).collect();
    let mins: Result<Vec<f64>> = pts
        .par_iter()
        .map(|&h1| pts.iter().map(|&h2| bound_gap(h1, h2)).try_fold(f64::INFINITY, |m, v| v.map(|v| m.min(v))))
        .collect();
    Ok(mins?.into_iter().fold(f64::INFINITY, f64::min))
}

pub fn entropy_gap(
    w1: &SynthesizedChannel,
    w2: &SynthesizedChannel,
    a: f64,
    b: f64,
    limits: &Limits,
) -> Result<GapReport> {
    let minus = w1.minus(w2, limits)?;
    let plus = w1.plus(w2, limits)?;
    let (i1, i2) = (w1.information(), w2.information());
    let (h1, h2) = (w1.entropy(), w2.entropy());
    Ok(GapReport {
        gap: plus.information() - minus.information() - (i1 - i2).abs(),
        gap_from_box: 2.0 * (minus.entropy() - h1.max(h2)),
        pointwise_floor: bound_gap(h1, h2)?,
        kappa_floor: kappa_floor(a, b)?,
        in_band: (a..=b).contains(&i1) && (a..=b).contains(&i2),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TRun {
    /// E[T_n] for n = 0..=depth, T = h(1 − h) with h = H/ln2.
    pub series: Vec<f64>,
    /// Least-squares κ in (ln E[T_n])² ≈ 2κn + c over the levels with E[T_n] > 0.
    pub kappa_fit: Option<f64>,
}

fn t_value(w: &SynthesizedChannel) -> f64 {
    let h = w.entropy() / LN2;
    h * (1.0 - h)
}

pub fn t_functional_run(w: &SynthesizedChannel, depth: usize, limits: &Limits) -> Result<TRun> {
    if depth > limits.max_depth {
        return Err(PolarError::Cap(format!("depth {depth} exceeds cap {}", limits.max_depth)));
    }
    let mut level = vec![w.clone()];
    let mut series = vec![t_value(w)];
    for n in 1..=depth {
        let children: Result<Vec<[SynthesizedChannel; 2]>> =
            level.par_iter().map(|c| Ok([c.minus(c, limits)?, c.plus(c, limits)?])).collect();
        level = children?.into_iter().flatten().collect();
        let t = level.par_iter().map(t_value).sum::<f64>() / level.len() as f64;
        let prev = series[n - 1];
        if t > prev + 1e-12 {
            return Err(PolarError::Invariant(format!("E[T] increased from {prev} to {t} at level {n}")));
        }
        series.push(t);
    }
    Ok(TRun { kappa_fit: fit_kappa(&series), series })
}

fn fit_kappa(series: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        series.iter().enumerate().filter(|(_, t)| **t > 0.0).map(|(n, t)| (n as f64, t.ln().powi(2))).collect();
    if pts.len() < 3 {
        return None;
    }
    let k = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / k, pts.iter().map(|p| p.1).sum::<f64>() / k);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use combine::BinaryCqChannel;
    use numkernel::random::random_state;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn perfect_input_has_zero_gap() {
        let l = Limits::default();
        let perfect = SynthesizedChannel::bec(0.0).unwrap();
        let w = SynthesizedChannel::bsc(0.2).unwrap();
        let r = entropy_gap(&perfect, &w, 0.05, 0.6, &l).unwrap();
        assert!(r.gap.abs() < 1e-12 && r.gap_from_box.abs() < 1e-12);
    }

    #[test]
    fn bec_pair_matches_closed_form() {
        let l = Limits::default();
        let w = SynthesizedChannel::bec(0.5).unwrap();
        let r = entropy_gap(&w, &w, 0.05, 0.6, &l).unwrap();
        // minus erases with 0.75, plus with 0.25
        let oracle = (0.75 - 0.25) * LN2;
        assert!((r.gap - oracle).abs() < 1e-14);
        assert!((r.gap - r.gap_from_box).abs() < 1e-12);
        assert!(r.in_band && r.gap >= r.kappa_floor - 1e-7);
    }

    #[test]
    fn random_qubit_pairs_respect_floor() {
        let l = Limits::default();
        let (a, b) = (0.1 * LN2, 0.9 * LN2);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut checked = 0;
        while checked < 20 {
            let mk = |rng: &mut ChaCha8Rng| {
                SynthesizedChannel::dense(&BinaryCqChannel::new(random_state(rng, 2), random_state(rng, 2)).unwrap())
                    .unwrap()
            };
            let (w1, w2) = (mk(&mut rng), mk(&mut rng));
            let r = entropy_gap(&w1, &w2, a, b, &l).unwrap();
            assert!((r.gap - r.gap_from_box).abs() < 1e-8);
            assert!(r.gap >= r.pointwise_floor - 1e-7);
            if r.in_band {
                assert!(r.gap >= r.kappa_floor - 1e-7);
                checked += 1;
            }
        }
    }

    #[test]
    fn floor_is_positive_inside_band() {
        let f = kappa_floor(0.1 * LN2, 0.9 * LN2).unwrap();
        assert!(f > 0.0 && f < 0.1, "{f}");
        assert!(kappa_floor(0.5, 0.1).is_err());
    }

    #[test]
    fn t_series_for_bec_decreases() {
        let run = t_functional_run(&SynthesizedChannel::bec(0.5).unwrap(), 16, &Limits::default()).unwrap();
        assert!((run.series[0] - 0.25).abs() < 1e-15);
        // one step of the erasure recursion by hand
        let t1 = 0.5 * (0.75 * 0.25 + 0.25 * 0.75);
        assert!((run.series[1] - t1).abs() < 1e-15);
        assert!(run.series.windows(2).all(|w| w[1] <= w[0]));
        assert!(run.kappa_fit.unwrap() > 0.0);
    }

    #[test]
    fn t_is_zero_for_perfect_channel() {
        let run = t_functional_run(&SynthesizedChannel::bec(0.0).unwrap(), 4, &Limits::default()).unwrap();
        assert!(run.series.iter().all(|t| *t == 0.0));
        assert!(run.kappa_fit.is_none());
    }

    #[test]
    fn t_decreases_for_dense_channel() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let w = BinaryCqChannel::new(
            numkernel::DensityMatrix::pure(&numkernel::random::random_ket(&mut rng, 2), vec![2]).unwrap(),
            numkernel::DensityMatrix::pure(&numkernel::random::random_ket(&mut rng, 2), vec![2]).unwrap(),
        )
        .unwrap();
        let run = t_functional_run(&SynthesizedChannel::dense(&w).unwrap(), 3, &Limits::default()).unwrap();
        assert_eq!(run.series.len(), 4);
    }
}
