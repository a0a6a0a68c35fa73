use numkernel::LN2;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{Limits, SynthesizedChannel};
use crate::{PolarError, Result};

const NU_TOL: f64 = 1e-10;

/// Tree statistics at one level, with I = ln2 − H in nats.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolarStats {
    pub n: usize,
    /// Fraction with I < a.
    pub alpha: f64,
    /// Fraction with a ≤ I ≤ b.
    pub theta: f64,
    /// Fraction with I > b.
    pub beta: f64,
    pub mu_n: f64,
    pub nu_n: f64,
}

impl PolarStats {
    pub fn from_information(n: usize, info: &[f64], a: f64, b: f64) -> Self {
        let len = info.len() as f64;
        let lo = info.iter().filter(|&&i| i < a).count();
        let hi = info.iter().filter(|&&i| i > b).count();
        let mid = info.len() - lo - hi;
        Self {
            n,
            alpha: lo as f64 / len,
            theta: mid as f64 / len,
            beta: hi as f64 / len,
            mu_n: info.iter().sum::<f64>() / len,
            nu_n: info.iter().map(|i| i * i).sum::<f64>() / len,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PolarRun {
    pub levels: Vec<PolarStats>,
    /// max_n |μ_n − μ_0|.
    pub mu_drift: f64,
    /// Whether θ_n at the last level is below θ_0.
    pub theta_decreased: bool,
    /// I(W)/ln2, the fraction the good side should approach.
    pub capacity_fraction: f64,
}

fn check_band(a: f64, b: f64) -> Result<()> {
    if !(0.0 < a && a < b && b < LN2) {
        return Err(PolarError::Argument(format!("thresholds need 0 < a < b < ln2, got a = {a}, b = {b}")));
    }
    Ok(())
}

fn check_depth(depth: usize, limits: &Limits) -> Result<()> {
    if depth > limits.max_depth {
        return Err(PolarError::Cap(format!("depth {depth} exceeds cap {}", limits.max_depth)));
    }
    Ok(())
}

fn level_information(level: &[SynthesizedChannel]) -> Vec<f64> {
    level.par_iter().map(|w| w.information()).collect()
}

fn finish(levels: Vec<PolarStats>) -> Result<PolarRun> {
    for w in levels.windows(2) {
        if w[1].nu_n < w[0].nu_n - NU_TOL {
            return Err(PolarError::Invariant(format!(
                "second moment decreased from {} to {} at level {}",
                w[0].nu_n, w[1].nu_n, w[1].n
            )));
        }
    }
    let mu0 = levels[0].mu_n;
    let last = levels.last().expect("level 0 is always present");
    Ok(PolarRun {
        mu_drift: levels.iter().map(|s| (s.mu_n - mu0).abs()).fold(0.0, f64::max),
        theta_decreased: last.theta < levels[0].theta || levels[0].theta == 0.0,
        capacity_fraction: mu0 / LN2,
        levels,
    })
}

/// Full stationary tree {W^s : s ∈ {+,−}^n} for n = 0..=depth.
pub fn polarization_run(w: &SynthesizedChannel, depth: usize, a: f64, b: f64, limits: &Limits) -> Result<PolarRun> {
    check_band(a, b)?;
    check_depth(depth, limits)?;
    let mut level = vec![w.clone()];
    let mut stats = vec![PolarStats::from_information(0, &level_information(&level), a, b)];
    for n in 1..=depth {
        let children: Result<Vec<[SynthesizedChannel; 2]>> =
            level.par_iter().map(|c| Ok([c.minus(c, limits)?, c.plus(c, limits)?])).collect();
        level = children?.into_iter().flatten().collect();
        stats.push(PolarStats::from_information(n, &level_information(&level), a, b));
    }
    finish(stats)
}

/// One level of the block recursion: within each block of N = 2^n entries,
/// position j pairs with N/2 + j, giving ⟨·,·⟩⁻ at j and ⟨·,·⟩⁺ at N/2 + j.
pub fn nonstationary_step(level: &[SynthesizedChannel], n: usize, limits: &Limits) -> Result<Vec<SynthesizedChannel>> {
    let size = 1usize << n;
    let half = size / 2;
    if level.len() % size != 0 {
        return Err(PolarError::Argument(format!("list length {} is not a multiple of {size}", level.len())));
    }
    let blocks: Result<Vec<Vec<SynthesizedChannel>>> = level
        .par_chunks(size)
        .map(|blk| {
            let mut out = blk.to_vec();
            for j in 0..half {
                out[j] = blk[j].minus(&blk[half + j], limits)?;
                out[half + j] = blk[j].plus(&blk[half + j], limits)?;
            }
            Ok(out)
        })
        .collect();
    Ok(blocks?.into_iter().flatten().collect())
}

/// Non-stationary recursion over a list whose length is a multiple of 2^depth.
pub fn nonstationary_run(
    channels: &[SynthesizedChannel],
    depth: usize,
    a: f64,
    b: f64,
    limits: &Limits,
) -> Result<PolarRun> {
    check_band(a, b)?;
    check_depth(depth, limits)?;
    if channels.is_empty() || channels.len() % (1usize << depth) != 0 {
        return Err(PolarError::Argument(format!(
            "list length {} must be a positive multiple of 2^{depth}",
            channels.len()
        )));
    }
    let mut level = channels.to_vec();
    let mut stats = vec![PolarStats::from_information(0, &level_information(&level), a, b)];
    for n in 1..=depth {
        level = nonstationary_step(&level, n, limits)?;
        stats.push(PolarStats::from_information(n, &level_information(&level), a, b));
    }
    finish(stats)
}
