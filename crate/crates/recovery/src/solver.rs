use entropy::{measured_relative_entropy, relative_entropy};
use numkernel::optim::lbfgs;
use numkernel::random::ginibre;
use numkernel::{
    c64, eigh, frechet, identity, psd_pow, ptrace, sqrtm, tensor, tr_prod, CMat, Complex64, DensityMatrix, DMatrix,
    DVector, EIG_TOL,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::choi::ChoiMatrix;
use crate::petz::{petz_recovered, RotatedPetzFamily};
use crate::{Frame, Result, Side};

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    /// Random restarts on top of the warm start(s).
    pub restarts: usize,
    pub max_iters: u64,
    pub grad_tol: f64,
    /// Kraus operators per map; defaults to d_in · d_out.
    pub kraus_rank: Option<usize>,
    /// Weight of the completely depolarizing map mixed into every iterate.
    pub eps: f64,
    pub seed: u64,
    /// Random bases tried by the measured relative entropy.
    pub measured_restarts: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            restarts: 2,
            max_iters: 4000,
            grad_tol: 1e-11,
            kraus_rank: None,
            eps: 1e-9,
            seed: 0x5eed,
            measured_restarts: 2,
        }
    }
}

/// One summand w · D(target ‖ (1_Y ⊗ R_label)(input)).
#[derive(Clone, Debug)]
pub(crate) struct Term {
    pub weight: f64,
    pub label: usize,
    pub dy: usize,
    pub input: CMat,
    pub target: CMat,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Objective {
    RelativeEntropy,
    /// −F(target, output); single term only.
    Fidelity,
}

/// Minimization over CP maps {R_c} whose sum is trace preserving
/// (a channel when there is one label, an instrument otherwise),
/// parameterized by Kraus operators Ã normalized as Ã S^{-1/2}.
pub(crate) struct Problem {
    pub din: usize,
    pub dout: usize,
    pub labels: usize,
    pub rank: usize,
    pub terms: Vec<Term>,
    pub offset: f64,
    pub objective: Objective,
    pub eps: f64,
    t_log_t: Vec<f64>,
    sqrt_target: Vec<CMat>,
    /// Tr_in(input) ⊗ 1/d_out for the depolarizing admixture.
    dep: Vec<CMat>,
}

/// Tr_Y of a (dy·r) × (dy·s) block matrix.
fn ptrace_y(m: &CMat, dy: usize, r: usize, s: usize) -> CMat {
    let mut out = CMat::zeros(r, s);
    for y in 0..dy {
        out += m.view((y * r, y * s), (r, s));
    }
    out
}

fn ln_floor(x: f64) -> f64 {
    x.max(1e-300).ln()
}

impl Problem {
    pub fn new(din: usize, dout: usize, labels: usize, rank: usize, terms: Vec<Term>, offset: f64, objective: Objective, eps: f64) -> Self {
        let t_log_t = terms.iter().map(|t| tr_prod(&t.target, &numkernel::spectral_map(&t.target, |x| c64(if x > 0.0 { x.ln() } else { 0.0 }, 0.0)))).collect();
        let sqrt_target = terms.iter().map(|t| sqrtm(&t.target)).collect();
        let dep = terms
            .iter()
            .map(|t| {
                let ry = ptrace(&t.input, &[t.dy, din], &[0]).expect("consistent dims");
                tensor(&ry, &identity(dout)).unscale((dout * labels) as f64)
            })
            .collect();
        Self { din, dout, labels, rank, terms, offset, objective, eps, t_log_t, sqrt_target, dep }
    }

    pub fn n_params(&self) -> usize {
        2 * self.labels * self.rank * self.dout * self.din
    }

    fn unpack(&self, x: &[f64]) -> Vec<Vec<CMat>> {
        let block = self.dout * self.din;
        (0..self.labels)
            .map(|c| {
                (0..self.rank)
                    .map(|k| {
                        let base = (c * self.rank + k) * block;
                        CMat::from_fn(self.dout, self.din, |o, i| {
                            let idx = 2 * (base + o * self.din + i);
                            c64(x[idx], x[idx + 1])
                        })
                    })
                    .collect()
            })
            .collect()
    }

    pub fn pack(&self, kraus: &[Vec<CMat>]) -> Vec<f64> {
        let mut x = vec![0.0; self.n_params()];
        let block = self.dout * self.din;
        for (c, ks) in kraus.iter().enumerate().take(self.labels) {
            for (k, a) in ks.iter().enumerate().take(self.rank) {
                let base = (c * self.rank + k) * block;
                for o in 0..self.dout {
                    for i in 0..self.din {
                        let idx = 2 * (base + o * self.din + i);
                        x[idx] = a[(o, i)].re;
                        x[idx + 1] = a[(o, i)].im;
                    }
                }
            }
        }
        x
    }

    fn gram(&self, raw: &[Vec<CMat>]) -> CMat {
        let mut s = CMat::zeros(self.din, self.din);
        for a in raw.iter().flatten() {
            s += a.adjoint() * a;
        }
        numkernel::hermitize(&s) + identity(self.din).scale(1e-14)
    }

    /// Normalized Kraus operators Ã S^{-1/2}.
    pub fn kraus(&self, x: &[f64]) -> Vec<Vec<CMat>> {
        let raw = self.unpack(x);
        let si = psd_pow(&self.gram(&raw), -0.5);
        raw.iter().map(|ks| ks.iter().map(|a| a * &si).collect()).collect()
    }

    fn output(&self, kraus: &[Vec<CMat>], t: usize) -> CMat {
        let term = &self.terms[t];
        let mut x = CMat::zeros(term.dy * self.dout, term.dy * self.dout);
        for a in &kraus[term.label] {
            let big = tensor(&identity(term.dy), a);
            x += &big * &term.input * big.adjoint();
        }
        numkernel::hermitize(&(x.scale(1.0 - self.eps) + self.dep[t].scale(self.eps)))
    }

    /// Term value and the operator M with d(value) = −Tr[M dX].
    fn term_value(&self, t: usize, x: &CMat) -> (f64, CMat) {
        let term = &self.terms[t];
        match self.objective {
            Objective::RelativeEntropy => {
                let (vals, u) = eigh(x);
                let logx = rebuild(&vals.iter().map(|&v| ln_floor(v)).collect::<Vec<_>>(), &u);
                let v = term.weight * (self.t_log_t[t] - tr_prod(&term.target, &logx));
                let m = frechet(x, &term.target, ln_floor, |v| 1.0 / v.max(1e-300)).scale(term.weight);
                (v, m)
            }
            Objective::Fidelity => {
                let s = &self.sqrt_target[t];
                let inner = numkernel::hermitize(&(s * x * s));
                let (vals, u) = eigh(&inner);
                let f: f64 = vals.iter().map(|&v| v.max(0.0).sqrt()).sum();
                let isq = rebuild(&vals.iter().map(|&v| if v > EIG_TOL * 1e-3 { 1.0 / v.sqrt() } else { 0.0 }).collect::<Vec<_>>(), &u);
                let m = (s * isq * s).scale(0.5 * term.weight);
                (-term.weight * f, m)
            }
        }
    }

    /// Objective and gradient in the raw parameters.
    pub fn eval(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let raw = self.unpack(x);
        let s = self.gram(&raw);
        let si = psd_pow(&s, -0.5);
        let kraus: Vec<Vec<CMat>> = raw.iter().map(|ks| ks.iter().map(|a| a * &si).collect()).collect();
        let mut value = self.offset;
        let mut e: Vec<Vec<CMat>> = vec![vec![CMat::zeros(self.dout, self.din); self.rank]; self.labels];
        for (t, term) in self.terms.iter().enumerate() {
            let out = self.output(&kraus, t);
            let (v, m) = self.term_value(t, &out);
            value += v;
            let m = m.scale(1.0 - self.eps);
            for (k, a) in kraus[term.label].iter().enumerate() {
                let big = tensor(&identity(term.dy), a);
                let prod = &m * big * &term.input;
                e[term.label][k] -= ptrace_y(&prod, term.dy, self.dout, self.din);
            }
        }
        // chain rule through A = Ã S^{-1/2}
        let mut p = CMat::zeros(self.din, self.din);
        for (ra, ea) in raw.iter().flatten().zip(e.iter().flatten()) {
            p += ra.adjoint() * ea;
        }
        let q = frechet(&s, &(&p + p.adjoint()), |v| v.max(1e-300).powf(-0.5), |v| -0.5 * v.max(1e-300).powf(-1.5));
        let mut grad = vec![0.0; x.len()];
        let block = self.dout * self.din;
        for c in 0..self.labels {
            for k in 0..self.rank {
                let et = &e[c][k] * &si + &raw[c][k] * &q;
                let base = (c * self.rank + k) * block;
                for o in 0..self.dout {
                    for i in 0..self.din {
                        let idx = 2 * (base + o * self.din + i);
                        grad[idx] = 2.0 * et[(o, i)].re;
                        grad[idx + 1] = 2.0 * et[(o, i)].im;
                    }
                }
            }
        }
        (value, grad)
    }

    /// Choi matrices of the regularized maps actually evaluated.
    pub fn chois(&self, kraus: &[Vec<CMat>]) -> Vec<ChoiMatrix> {
        let n = self.din * self.dout;
        kraus
            .iter()
            .map(|ks| {
                let j = ChoiMatrix::from_kraus(ks).expect("nonempty Kraus list");
                let m = j.mat().scale(1.0 - self.eps) + identity(n).scale(self.eps / (self.dout * self.labels) as f64);
                ChoiMatrix::unchecked(m, self.din, self.dout).expect("consistent dims")
            })
            .collect()
    }

    /// Value at the given Choi matrices and a certified lower bound on the
    /// minimum over all admissible maps (relative entropy objective).
    pub fn certificate(&self, chois: &[ChoiMatrix]) -> (f64, f64) {
        let mut value = self.offset;
        let n = self.din * self.dout;
        let mut g = vec![CMat::zeros(n, n); self.labels];
        for (t, term) in self.terms.iter().enumerate() {
            let x = chois[term.label].apply(&term.input, term.dy).expect("consistent dims");
            let (v, m) = self.term_value(t, &x);
            value += v;
            for i in 0..self.din {
                for j in 0..self.din {
                    let b = CMat::from_fn(term.dy, term.dy, |y, z| term.input[(y * self.din + i, z * self.din + j)]);
                    let mut blk = CMat::zeros(self.dout, self.dout);
                    for y in 0..term.dy {
                        for z in 0..term.dy {
                            let w = b[(y, z)];
                            if w.norm_sqr() == 0.0 {
                                continue;
                            }
                            blk += m.view((z * self.dout, y * self.dout), (self.dout, self.dout)) * w;
                        }
                    }
                    let mut view = g[term.label].view_mut((j * self.dout, i * self.dout), (self.dout, self.dout));
                    view -= blk;
                }
            }
        }
        let g: Vec<CMat> = g.iter().map(numkernel::hermitize).collect();
        let linear: f64 = g.iter().zip(chois).map(|(gc, jc)| tr_prod(gc, jc.mat())).sum();
        let dual = dual_trace_bound(&g, self.din, self.dout);
        (value, value - linear + dual)
    }
}

fn rebuild(vals: &[f64], u: &CMat) -> CMat {
    let mut scaled = u.clone();
    for (j, &v) in vals.iter().enumerate() {
        let mut col = scaled.column_mut(j);
        col *= Complex64::from(v);
    }
    scaled * u.adjoint()
}

/// Orthonormal basis of d × d Hermitian matrices.
fn hermitian_basis(d: usize) -> Vec<CMat> {
    let mut out = Vec::with_capacity(d * d);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..d {
        let mut m = CMat::zeros(d, d);
        m[(j, j)] = c64(1.0, 0.0);
        out.push(m);
        for k in j + 1..d {
            let mut a = CMat::zeros(d, d);
            a[(j, k)] = c64(r, 0.0);
            a[(k, j)] = c64(r, 0.0);
            out.push(a);
            let mut b = CMat::zeros(d, d);
            b[(j, k)] = c64(0.0, -r);
            b[(k, j)] = c64(0.0, r);
            out.push(b);
        }
    }
    out
}

fn min_eig_all(z: &[CMat]) -> f64 {
    z.iter().map(numkernel::min_eig).fold(f64::INFINITY, f64::min)
}

/// max Tr Y subject to G_c ⪰ Y ⊗ 1 for every c, by a log-barrier Newton
/// method. The returned value is attained by a strictly feasible Y, so it
/// is a valid lower bound on min Σ_c ⟨G_c, J_c⟩ over Choi matrices with
/// Σ_c Tr_out J_c = 1.
pub(crate) fn dual_trace_bound(g: &[CMat], din: usize, dout: usize) -> f64 {
    let basis = hermitian_basis(din);
    let lifted: Vec<CMat> = basis.iter().map(|h| tensor(h, &identity(dout))).collect();
    let nb = basis.len();
    let total_dim = (g.len() * din * dout) as f64;
    let lo = min_eig_all(g);
    let mut y = identity(din).scale(lo - 1.0);
    let zs = |y: &CMat| -> Vec<CMat> {
        let ly = tensor(y, &identity(dout));
        g.iter().map(|gc| numkernel::hermitize(&(gc - &ly))).collect()
    };
    let barrier = |y: &CMat, mu: f64| -> Option<f64> {
        let mut acc = numkernel::trace(y).re;
        for z in zs(y) {
            let vals = numkernel::eigvalsh(&z);
            if vals[0] <= 0.0 {
                return None;
            }
            acc += mu * vals.iter().map(|v| v.ln()).sum::<f64>();
        }
        Some(acc)
    };
    let scale = g.iter().map(|gc| gc.camax()).fold(1.0, f64::max);
    let mut mu = scale;
    while mu * total_dim > 1e-14 * scale.max(1.0) {
        for _ in 0..100 {
            let z = zs(&y);
            let zinv: Vec<CMat> = match z.iter().map(|zc| zc.clone().cholesky().map(|c| c.inverse())).collect::<Option<Vec<_>>>() {
                Some(v) => v,
                None => break,
            };
            let mut grad = DVector::<f64>::zeros(nb);
            let mut hess = DMatrix::<f64>::zeros(nb, nb);
            for zi in &zinv {
                let ks: Vec<CMat> = lifted.iter().map(|l| zi * l).collect();
                for a in 0..nb {
                    grad[a] -= mu * numkernel::trace(&ks[a]).re;
                    for b in a..nb {
                        let v: f64 = ks[a].iter().zip(ks[b].transpose().iter()).map(|(p, q)| (p * q).re).sum();
                        hess[(a, b)] += mu * v;
                        if a != b {
                            hess[(b, a)] += mu * v;
                        }
                    }
                }
            }
            for a in 0..nb {
                grad[a] += numkernel::trace(&basis[a]).re;
            }
            // hess holds the negated Hessian, which is positive definite
            let step = match hess.clone().cholesky() {
                Some(ch) => ch.solve(&grad),
                None => break,
            };
            let dec = grad.dot(&step);
            if dec < 1e-14 {
                break;
            }
            let dy: CMat = basis.iter().zip(step.iter()).map(|(h, &s)| h.scale(s)).sum();
            let f0 = barrier(&y, mu).unwrap_or(f64::NEG_INFINITY);
            let mut s = 1.0;
            let mut moved = false;
            while s > 1e-12 {
                let cand = &y + dy.scale(s);
                if let Some(f1) = barrier(&cand, mu) {
                    if f1 >= f0 + 0.25 * s * dec {
                        y = cand;
                        moved = true;
                        break;
                    }
                }
                s *= 0.5;
            }
            if !moved {
                break;
            }
        }
        mu *= 0.125;
    }
    // guard against rounding: shift into the feasible set
    let slack = min_eig_all(&zs(&y));
    if slack < 0.0 {
        y -= identity(din).scale(-slack * (1.0 + 1e-12));
    }
    numkernel::trace(&y).re
}

/// Runs L-BFGS from each start and keeps the best point.
pub(crate) fn solve(problem: &Problem, starts: Vec<Vec<f64>>, opts: &SolverOptions) -> (f64, Vec<f64>, u64) {
    let mut best: Option<(f64, Vec<f64>, u64)> = None;
    for x0 in starts {
        let m = lbfgs(|x| problem.eval(x), x0, opts.max_iters, opts.grad_tol);
        if best.as_ref().is_none_or(|b| m.value < b.0) {
            best = Some((m.value, m.x, m.iters));
        }
    }
    best.expect("at least one start")
}

/// Start vectors: each warm start padded with small noise, then random ones.
pub(crate) fn starts(problem: &Problem, warm: &[Vec<Vec<CMat>>], opts: &SolverOptions) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::new();
    for w in warm {
        let mut x = problem.pack(w);
        for v in &mut x {
            *v += 1e-4 * rng.random_range(-1.0..1.0);
        }
        out.push(x);
    }
    for _ in 0..opts.restarts {
        let ks: Vec<Vec<CMat>> = (0..problem.labels)
            .map(|_| (0..problem.rank).map(|_| ginibre(&mut rng, problem.dout, problem.din)).collect())
            .collect();
        out.push(problem.pack(&ks));
    }
    out
}

/// Kraus operators L (|x⟩ ⊗ 1_C) of a Petz-type map Z ↦ L (1_X ⊗ Z) L†.
pub(crate) fn petz_kraus(frame: &Frame) -> Vec<CMat> {
    let j = RotatedPetzFamily::standard(frame.xc.clone()).expect("bipartite reference").choi(0.0).expect("dims");
    j.kraus()
}

/// Optimized relative entropy of recovery with a certificate.
#[derive(Clone, Debug)]
pub struct RecoveryResult {
    pub value: f64,
    /// Certified lower bound on the infimum over all recovery maps.
    pub lower_bound: f64,
    /// value − lower_bound.
    pub gap: f64,
    /// One Choi matrix per instrument outcome (a single one for channels).
    pub chois: Vec<ChoiMatrix>,
    /// The recovered state, in the input's subsystem order.
    pub recovered: DensityMatrix,
    /// D(ρ ‖ Petz-recovered ρ), when defined.
    pub petz_value: Option<f64>,
    pub iterations: u64,
}

fn rank_for(opts: &SolverOptions, din: usize, dout: usize) -> usize {
    opts.kraus_rank.unwrap_or(din * dout).max(1)
}

/// inf_R D(ρ_ABC ‖ (1 ⊗ R_{C→XC})(ρ_YC)), X the recovered system.
pub fn relative_entropy_of_recovery(rho: &DensityMatrix, side: Side, opts: &SolverOptions) -> Result<RecoveryResult> {
    relative_entropy_of_recovery_warm(rho, side, opts, &[])
}

pub(crate) fn relative_entropy_of_recovery_warm(
    rho: &DensityMatrix,
    side: Side,
    opts: &SolverOptions,
    extra: &[Vec<CMat>],
) -> Result<RecoveryResult> {
    let f = Frame::new(rho, side)?;
    let (din, dout) = (f.dc, f.dx * f.dc);
    let term = Term { weight: 1.0, label: 0, dy: f.dy, input: f.input.clone(), target: f.target.mat().clone() };
    let problem = Problem::new(din, dout, 1, rank_for(opts, din, dout), vec![term], 0.0, Objective::RelativeEntropy, opts.eps);
    let mut warm = vec![vec![petz_kraus(&f)]];
    warm.extend(extra.iter().map(|k| vec![k.clone()]));
    let (_, x, iters) = solve(&problem, starts(&problem, &warm, opts), opts);
    let chois = problem.chois(&problem.kraus(&x));
    let (value, lb) = problem.certificate(&chois);
    let out = chois[0].apply(&f.input, f.dy)?;
    let petz = relative_entropy(rho, &petz_recovered(rho, side, 0.0)?);
    Ok(RecoveryResult {
        value,
        lower_bound: lb,
        gap: value - lb,
        recovered: f.to_abc(out, side)?,
        chois,
        petz_value: petz.is_finite().then_some(petz.value),
        iterations: iters,
    })
}

/// Optimized fidelity of recovery.
#[derive(Clone, Debug)]
pub struct FidelityResult {
    /// Root fidelity F(ρ, R(ρ_YC)) at the best map found.
    pub fidelity: f64,
    /// F², the quantity maximized.
    pub value: f64,
    pub choi: ChoiMatrix,
    pub recovered: DensityMatrix,
    pub petz_fidelity: f64,
    pub iterations: u64,
}

/// sup_R F(ρ_ABC, (1 ⊗ R_{C→XC})(ρ_YC)), warm-started at the Petz map.
pub fn fidelity_of_recovery(rho: &DensityMatrix, side: Side, opts: &SolverOptions) -> Result<FidelityResult> {
    fidelity_of_recovery_warm(rho, side, opts, &[])
}

pub(crate) fn fidelity_of_recovery_warm(
    rho: &DensityMatrix,
    side: Side,
    opts: &SolverOptions,
    extra: &[ChoiMatrix],
) -> Result<FidelityResult> {
    let f = Frame::new(rho, side)?;
    let (din, dout) = (f.dc, f.dx * f.dc);
    let term = Term { weight: 1.0, label: 0, dy: f.dy, input: f.input.clone(), target: f.target.mat().clone() };
    let problem = Problem::new(din, dout, 1, rank_for(opts, din, dout), vec![term], 0.0, Objective::Fidelity, opts.eps);
    let mut warm = vec![vec![petz_kraus(&f)]];
    warm.extend(extra.iter().map(|j| vec![j.kraus()]));
    let (_, x, iters) = solve(&problem, starts(&problem, &warm, opts), opts);
    let mut choi = problem.chois(&problem.kraus(&x)).remove(0);
    let fid_of = |j: &ChoiMatrix| -> Result<(f64, CMat)> {
        let out = j.apply(&f.input, f.dy)?;
        Ok((numkernel::fidelity_mat(f.target.mat(), &out).min(1.0), out))
    };
    let (mut fid, mut out) = fid_of(&choi)?;
    // every warm start is itself a channel
    for j in extra {
        let (v, o) = fid_of(j)?;
        if v > fid {
            fid = v;
            out = o;
            choi = j.clone();
        }
    }
    let petz_state = petz_recovered(rho, side, 0.0)?;
    let petz_fidelity = numkernel::fidelity_mat(rho.mat(), petz_state.mat()).min(1.0);
    Ok(FidelityResult {
        fidelity: fid,
        value: fid * fid,
        choi,
        recovered: f.to_abc(out, side)?,
        petz_fidelity,
        iterations: iters,
    })
}

/// min over the candidate recovered states of D_M(ρ ‖ candidate).
pub fn measured_recovery_estimate<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    candidates: &[DensityMatrix],
    restarts: usize,
    rng: &mut R,
) -> Result<f64> {
    let mut best = f64::INFINITY;
    for c in candidates {
        let m = measured_relative_entropy(rho, c, restarts, 1e-10, rng)?;
        best = best.min(m.value);
    }
    Ok(best)
}

/// I(A:B|C) together with the recoverability quantities that it bounds.
#[derive(Clone, Debug)]
pub struct ChainReport {
    pub cqmi: f64,
    pub d_rec: f64,
    pub d_rec_lower: f64,
    /// Measured relative entropy of recovery, minimized over the Petz, the
    /// β₀-averaged and the relative-entropy-optimal maps.
    pub d_m_rec: f64,
    /// Optimized root fidelity of recovery.
    pub f_opt: f64,
    /// −2 ln F_opt.
    pub neg_log_f: f64,
}

/// Evaluates every link of I ≥ D_M,rec ≥ −2 ln F_opt and D_rec.
pub fn recovery_chain<R: Rng + ?Sized>(rho: &DensityMatrix, side: Side, opts: &SolverOptions, rng: &mut R) -> Result<ChainReport> {
    let cqmi = entropy::cqmi(rho, &[0], &[1], &[2])?;
    let f = Frame::new(rho, side)?;
    let fam = RotatedPetzFamily::standard(f.xc.clone())?;
    let petz_choi = fam.choi(0.0)?;
    let avg_choi = fam.averaged_choi()?;
    let drec = relative_entropy_of_recovery_warm(rho, side, opts, &[avg_choi.kraus()])?;
    let states = [&petz_choi, &avg_choi, &drec.chois[0]]
        .iter()
        .map(|j| f.to_abc(j.apply(&f.input, f.dy)?, side))
        .collect::<Result<Vec<_>>>()?;
    let d_m_rec = measured_recovery_estimate(rho, &states, opts.measured_restarts, rng)?;
    let fid = fidelity_of_recovery_warm(rho, side, opts, &[petz_choi, avg_choi, drec.chois[0].clone()])?;
    Ok(ChainReport {
        cqmi,
        d_rec: drec.value,
        d_rec_lower: drec.lower_bound,
        d_m_rec,
        f_opt: fid.fidelity,
        neg_log_f: -2.0 * fid.fidelity.max(1e-300).ln(),
    })
}
