use entropy::{measured_relative_entropy, EntropyError};
use numkernel::{basis_proj, bloch_matrix, c64, tensor, tensor_all, CMat, DVector, DensityMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::choi::ChoiMatrix;
use crate::petz::RotatedPetzFamily;
use crate::solver::{petz_kraus, solve, starts, Objective, Problem, RecoveryResult, SolverOptions, Term};
use crate::{Frame, RecoveryError, Result, Side};

/// (|000⟩ + cos θ |011⟩ + sin θ |110⟩)/√2 on A B C.
pub fn fawzi_fawzi_state(theta: f64) -> Result<DensityMatrix> {
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(RecoveryError::Argument(format!("theta {theta} outside [0, π/2]")));
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut psi = DVector::zeros(8);
    psi[0] = c64(r, 0.0);
    psi[3] = c64(r * theta.cos(), 0.0);
    psi[6] = c64(r * theta.sin(), 0.0);
    Ok(DensityMatrix::pure(&psi, vec![2, 2, 2])?)
}

fn check_qubit(s: &DensityMatrix) -> Result<()> {
    if s.dim() != 2 {
        return Err(RecoveryError::Argument(format!("expected a qubit state, got dimension {}", s.dim())));
    }
    Ok(())
}

/// ω_ac = σ_{a⊕c} ⊗ σ_c on B₁B₂, indexed [a][c].
pub fn ccq_blocks(s0: &DensityMatrix, s1: &DensityMatrix) -> Result<[[CMat; 2]; 2]> {
    check_qubit(s0)?;
    check_qubit(s1)?;
    let s = [s0.mat(), s1.mat()];
    let w = |a: usize, c: usize| tensor(s[a ^ c], s[c]);
    Ok([[w(0, 0), w(0, 1)], [w(1, 0), w(1, 1)]])
}

/// ¼ Σ_{a,c} |a⟩⟨a| ⊗ |c⟩⟨c| ⊗ ω_ac with dims [A, C, B₁B₂] = [2, 2, 4].
/// The conditioning system B₁B₂ is last.
pub fn ccq_state(s0: &DensityMatrix, s1: &DensityMatrix) -> Result<DensityMatrix> {
    let w = ccq_blocks(s0, s1)?;
    let mut m = CMat::zeros(16, 16);
    for (a, row) in w.iter().enumerate() {
        for (c, blk) in row.iter().enumerate() {
            m += tensor_all(&[&basis_proj(2, a), &basis_proj(2, c), blk]).scale(0.25);
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(m, vec![2, 2, 4]))
}

/// Pure qubit pair with Bloch vectors (−0.9, √0.03, 0.4) and
/// (−0.9 + 0.01x, v, 0.4001), v ≥ 0 fixed by unit length.
pub fn violation_family(x: f64) -> Result<(DensityMatrix, DensityMatrix)> {
    if !(1.0..=9.0).contains(&x) {
        return Err(RecoveryError::Argument(format!("x = {x} outside [1, 9]")));
    }
    let a0 = [-0.9, 0.03f64.sqrt(), 0.4];
    let (u, w) = (-0.9 + 0.01 * x, 0.4001);
    let rest = 1.0 - u * u - w * w;
    if rest < 0.0 {
        return Err(RecoveryError::Argument(format!("no unit Bloch vector at x = {x}")));
    }
    let a1 = [u, rest.sqrt(), w];
    Ok((DensityMatrix::new(bloch_matrix(a0), vec![2])?, DensityMatrix::new(bloch_matrix(a1), vec![2])?))
}

/// Relative entropy of recovery of C from B for the ccq state.
///
/// A and C are classical, so the optimum is attained by an instrument
/// {R_c} on B and D = ¼ Σ_{a,c} D(ω_ac ‖ R_c(τ_a)) − ln 2 with
/// τ_a = (ω_a0 + ω_a1)/2. The returned Choi matrices are those of R_0, R_1
/// and `recovered` is in [A, C, B] order.
pub fn ccq_recovery(s0: &DensityMatrix, s1: &DensityMatrix, opts: &SolverOptions) -> Result<RecoveryResult> {
    let w = ccq_blocks(s0, s1)?;
    let tau: Vec<CMat> = (0..2).map(|a| (&w[a][0] + &w[a][1]).scale(0.5)).collect();
    let mut terms = Vec::with_capacity(4);
    for a in 0..2 {
        for c in 0..2 {
            terms.push(Term { weight: 0.25, label: c, dy: 1, input: tau[a].clone(), target: w[a][c].clone() });
        }
    }
    let rank = opts.kraus_rank.unwrap_or(4);
    let problem = Problem::new(4, 4, 2, rank, terms, -std::f64::consts::LN_2, Objective::RelativeEntropy, opts.eps);

    // Petz warm start: R_c(X) = ρ_{cB}^{1/2} ρ_B^{-1/2} X ρ_B^{-1/2} ρ_{cB}^{1/2}
    let rho = ccq_state(s0, s1)?;
    let frame = Frame::new(&rho, Side::B)?;
    let petz = petz_kraus(&frame);
    let split = |c: usize| -> Vec<CMat> {
        petz.iter().map(|k| k.view((4 * c, 0), (4, 4)).into_owned()).collect()
    };
    let warm = vec![vec![split(0), split(1)]];
    let (_, x, iters) = solve(&problem, starts(&problem, &warm, opts), opts);
    let chois = problem.chois(&problem.kraus(&x));
    let (value, lb) = problem.certificate(&chois);

    let recovered = ccq_instrument_output(&tau, &chois)?;
    let petz_value = entropy::relative_entropy(&rho, &crate::petz_recovered(&rho, Side::B, 0.0)?);
    Ok(RecoveryResult {
        value,
        lower_bound: lb,
        gap: value - lb,
        chois,
        recovered,
        petz_value: petz_value.is_finite().then_some(petz_value.value),
        iterations: iters,
    })
}

fn ccq_instrument_output(tau: &[CMat], chois: &[ChoiMatrix]) -> Result<DensityMatrix> {
    let mut m = CMat::zeros(16, 16);
    for (a, t) in tau.iter().enumerate() {
        for (c, j) in chois.iter().enumerate() {
            let out = j.apply(t, 1)?;
            m += tensor_all(&[&basis_proj(2, a), &basis_proj(2, c), &out]).scale(0.5);
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(numkernel::hermitize(&m), vec![2, 2, 4]))
}

/// D_M between two states that are block diagonal in the classical A C
/// register: the optimal measurement reads the register first.
fn blockwise_measured(rho: &DensityMatrix, sigma: &DensityMatrix, restarts: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut total = 0.0;
    for i in 0..4 {
        let r = rho.mat().view((4 * i, 4 * i), (4, 4)).into_owned();
        let s = sigma.mat().view((4 * i, 4 * i), (4, 4)).into_owned();
        let (p, q) = (numkernel::trace(&r).re, numkernel::trace(&s).re);
        if p <= 0.0 {
            continue;
        }
        if q <= 0.0 {
            return Ok(f64::INFINITY);
        }
        let rn = DensityMatrix::from_matrix_unchecked(r.unscale(p), vec![4]);
        let sn = DensityMatrix::from_matrix_unchecked(s.unscale(q), vec![4]);
        let inner = match measured_relative_entropy(&rn, &sn, restarts, 1e-12, rng) {
            Ok(m) => m.value,
            Err(EntropyError::Support) => return Ok(f64::INFINITY),
            Err(e) => return Err(e.into()),
        };
        total += p * ((p / q).ln() + inner);
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    pub solver: SolverOptions,
    /// Random bases per block for the measured relative entropy.
    pub measured_restarts: usize,
    pub seed: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { solver: SolverOptions::default(), measured_restarts: 2, seed: 7 }
    }
}

/// One grid point of the counterexample scan.
#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub family: String,
    pub x: f64,
    pub cqmi: f64,
    pub d_rec: f64,
    /// Certified lower bound on D_rec.
    pub d_rec_lower: f64,
    pub d_m_rec: f64,
    pub gap: f64,
    /// d_rec_lower − cqmi; positive means the inequality I ≥ D_rec fails.
    pub margin: f64,
    pub flag: bool,
}

fn scan_row(family: &str, x: f64, s0: &DensityMatrix, s1: &DensityMatrix, opts: &ScanOptions, seed: u64) -> Result<ScanRow> {
    let rho = ccq_state(s0, s1)?;
    let cqmi = entropy::cqmi(&rho, &[0], &[1], &[2])?;
    let rec = ccq_recovery(s0, s1, &opts.solver)?;
    let frame = Frame::new(&rho, Side::B)?;
    let fam = RotatedPetzFamily::standard(frame.xc.clone())?;
    let mut candidates = vec![rec.recovered.clone()];
    for j in [fam.choi(0.0)?, fam.averaged_choi()?] {
        candidates.push(frame.to_abc(j.apply(&frame.input, frame.dy)?, Side::B)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d_m_rec = f64::INFINITY;
    for c in &candidates {
        d_m_rec = d_m_rec.min(blockwise_measured(&rho, c, opts.measured_restarts, &mut rng)?);
    }
    let margin = rec.lower_bound - cqmi;
    Ok(ScanRow {
        family: family.into(),
        x,
        cqmi,
        d_rec: rec.value,
        d_rec_lower: rec.lower_bound,
        d_m_rec,
        gap: rec.gap,
        margin,
        flag: margin > 0.0,
    })
}

/// CQMI against the relative entropy of recovery of C from B along the
/// violation family, followed by a control row with σ₀ = σ₁ (a Markov
/// state). Grid points are evaluated in parallel.
pub fn counterexample_scan(xs: &[f64], opts: &ScanOptions) -> Result<Vec<ScanRow>> {
    let mut rows: Vec<ScanRow> = xs
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            let (s0, s1) = violation_family(x)?;
            scan_row("ccq", x, &s0, &s1, opts, opts.seed.wrapping_add(i as u64))
        })
        .collect::<Result<_>>()?;
    if let Some(&x) = xs.first() {
        let (s0, _) = violation_family(x)?;
        rows.push(scan_row("control", x, &s0, &s0, opts, opts.seed.wrapping_sub(1))?);
    }
    Ok(rows)
}
