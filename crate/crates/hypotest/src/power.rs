use std::f64::consts::PI;

use numkernel::optim::nelder_mead;
use numkernel::{c64, identity, pauli_x, pauli_y, pauli_z, CMat, Complex64, DVector, DensityMatrix, Povm, EIG_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::exponents::{classical_chernoff, classical_hoeffding, classical_stein};
use crate::{ExponentResult, HypoError, Result};

/// Which classical exponent of the outcome statistics is maximized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    Chernoff,
    Stein,
    Hoeffding(f64),
}

#[derive(Clone, Copy, Debug)]
pub struct PowerOptions {
    pub restarts: usize,
    pub max_iters: u64,
    pub tol: f64,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self { restarts: 32, max_iters: 4000, tol: 1e-13 }
    }
}

/// Stand-in objective value for an infinite exponent.
const HUGE: f64 = 1e6;
const ORTHO_TOL: f64 = 1e-6;

fn ket_from_params(x: &[f64], d: usize) -> DVector<Complex64> {
    let v = if d == 2 {
        let (t, p) = (x[0], x[1]);
        DVector::from_vec(vec![c64((0.5 * t).cos(), 0.0), Complex64::from_polar((0.5 * t).sin(), p)])
    } else {
        DVector::from_fn(d, |i, _| c64(x[2 * i], x[2 * i + 1]))
    };
    let n = v.norm();
    if n > 0.0 {
        v.unscale(n)
    } else {
        numkernel::ket(d, 0)
    }
}

fn params_per_state(d: usize) -> usize {
    if d == 2 {
        2
    } else {
        2 * d
    }
}

fn outcome_probs(effects: &[CMat], psi: &DVector<Complex64>) -> Vec<f64> {
    effects.iter().map(|e| (psi.adjoint() * e * psi)[(0, 0)].re.max(0.0)).collect()
}

fn exponent(mode: Mode, p: &[f64], q: &[f64]) -> Result<ExponentResult> {
    Ok(match mode {
        Mode::Chernoff => classical_chernoff(p, q),
        Mode::Stein => classical_stein(p, q),
        Mode::Hoeffding(r) => classical_hoeffding(p, q, r)?,
    })
}

fn is_degenerate(povm: &Povm) -> bool {
    let d = povm.dim();
    povm.effects().iter().all(|e| {
        let t = numkernel::trace(e).re / d as f64;
        (e - identity(d).scale(t)).camax() <= EIG_TOL
    })
}

/// For Stein, a nonzero singular effect gives an infinite exponent: put σ
/// in its kernel and ρ in its support.
fn stein_infinite_witness(povm: &Povm) -> Option<(DVector<Complex64>, DVector<Complex64>)> {
    for e in povm.effects() {
        let (vals, u) = numkernel::eigh(e);
        let top = *vals.last().unwrap();
        if top > EIG_TOL && vals[0] <= EIG_TOL {
            let n = vals.len();
            return Some((u.column(n - 1).into_owned(), u.column(0).into_owned()));
        }
    }
    None
}

fn finish(mut res: ExponentResult, psi: &DVector<Complex64>, phi: &DVector<Complex64>) -> ExponentResult {
    let d = psi.len();
    let overlap = psi.dotc(phi).norm_sqr();
    res.orthogonal_witness = Some(overlap < ORTHO_TOL);
    res.witness = Some((
        DensityMatrix::pure(psi, vec![d]).expect("normalized ket"),
        DensityMatrix::pure(phi, vec![d]).expect("normalized ket"),
    ));
    res
}

/// Discrimination power of a POVM: the largest classical exponent of its
/// outcome statistics over state pairs.
///
/// The classical Chernoff coefficient is jointly concave and the relative
/// entropy jointly convex, so pure pairs suffice and the search runs over
/// pairs of kets (Bloch angles for qubits). Restarts are independent
/// Nelder-Mead runs, each seeded from `rng`, merged by max.
pub fn discrimination_power<R: Rng + ?Sized>(
    povm: &Povm,
    mode: Mode,
    opts: &PowerOptions,
    rng: &mut R,
) -> Result<ExponentResult> {
    if let Mode::Hoeffding(r) = mode {
        if !(r >= 0.0) {
            return Err(HypoError::Argument(format!("rate {r} must be non-negative")));
        }
    }
    let d = povm.dim();
    if is_degenerate(povm) {
        return Ok(ExponentResult::finite(0.0));
    }
    if mode == Mode::Stein {
        if let Some((psi, phi)) = stein_infinite_witness(povm) {
            return Ok(finish(ExponentResult::infinite(), &psi, &phi));
        }
    }
    let effects = povm.effects();
    let k = params_per_state(d);
    let objective = |x: &[f64]| -> f64 {
        let p = outcome_probs(effects, &ket_from_params(&x[..k], d));
        let q = outcome_probs(effects, &ket_from_params(&x[k..], d));
        match exponent(mode, &p, &q) {
            Ok(r) if r.infinite => -HUGE,
            Ok(r) => -r.value,
            Err(_) => f64::INFINITY,
        }
    };
    let seeds: Vec<u64> = (0..opts.restarts.max(1)).map(|_| rng.random()).collect();
    let runs: Vec<(f64, Vec<f64>)> = seeds
        .par_iter()
        .map(|&seed| {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let x0: Vec<f64> = if d == 2 {
                (0..2).flat_map(|_| [r.random_range(0.0..PI), r.random_range(0.0..2.0 * PI)]).collect()
            } else {
                (0..2 * k).map(|_| r.random_range(-1.0..1.0)).collect()
            };
            let m = nelder_mead(objective, x0, 0.5, opts.max_iters, opts.tol);
            (m.value, m.x)
        })
        .collect();
    let (_, x) = runs.into_iter().min_by(|a, b| a.0.total_cmp(&b.0)).expect("at least one restart");
    let psi = ket_from_params(&x[..k], d);
    let phi = ket_from_params(&x[k..], d);
    let res = exponent(mode, &outcome_probs(effects, &psi), &outcome_probs(effects, &phi))?;
    Ok(finish(res, &psi, &phi))
}

/// Noisy Stern-Gerlach measurement {(1 ± r σ_z)/2}.
pub fn stern_gerlach(r: f64) -> Result<Povm> {
    if !(0.0..=1.0).contains(&r) {
        return Err(HypoError::Argument(format!("purity {r} outside [0, 1]")));
    }
    let z = pauli_z().scale(0.5 * r);
    let h = identity(2).scale(0.5);
    Ok(Povm::new(vec![&h + &z, &h - &z])?)
}

/// Qubit covariant POVM {(1 + n·σ)} discretized on a Fibonacci sphere with
/// `n` directions, normalized to sum to the identity.
pub fn covariant_qubit_povm(n: usize) -> Result<Povm> {
    if n < 4 {
        return Err(HypoError::Argument("need at least 4 directions".into()));
    }
    let ga = PI * (3.0 - 5f64.sqrt());
    let (x, y, z) = (pauli_x(), pauli_y(), pauli_z());
    let ops = (0..n)
        .map(|i| {
            let c = 1.0 - (2 * i + 1) as f64 / n as f64;
            let s = (1.0 - c * c).sqrt();
            let a = ga * i as f64;
            (identity(2) + x.scale(s * a.cos()) + y.scale(s * a.sin()) + z.scale(c)).unscale(n as f64)
        })
        .collect();
    Ok(Povm::from_unnormalized(ops)?)
}

/// Mixed POVM {p Eᵢ} ∪ {(1−p) Gⱼ}.
pub fn mix_povms(e: &Povm, g: &Povm, p: f64) -> Result<Povm> {
    if !(0.0..=1.0).contains(&p) {
        return Err(HypoError::Argument(format!("weight {p} outside [0, 1]")));
    }
    if e.dim() != g.dim() {
        return Err(numkernel::KernelError::Dimension(format!("{} vs {}", e.dim(), g.dim())).into());
    }
    let effects = e.effects().iter().map(|x| x.scale(p)).chain(g.effects().iter().map(|x| x.scale(1.0 - p))).collect();
    Ok(Povm::new(effects)?)
}
