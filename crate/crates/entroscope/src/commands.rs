//! One function per subcommand, each returning a report for the sink.

use std::path::Path;

use combine::{BinaryCqChannel, PriorMode, SampleKind};
use gausscm::CovMatrix;
use hypotest::{ExponentResult, Mode, PowerOptions};
use numkernel::{DensityMatrix, MatrixJson, LN2};
use polar::{Limits, SynthesizedChannel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use recovery::{ScanOptions, Side, SolverOptions};
use serde::Deserialize;

use crate::args::*;
use crate::error::{CliError, Result};
use crate::fixtures;
use crate::input::{self, Source};
use crate::output::{Report, Table};

pub fn run(cmd: &Command, seed: u64) -> Result<Report> {
    match cmd {
        Command::Entropy(EntropyCmd::Eval(a)) => entropy_eval(a, seed),
        Command::Hypo(h) => hypo(h, seed),
        Command::Recover(r) => recover(r, seed),
        Command::Combine(c) => combine_cmd(c, seed),
        Command::Polar(p) => polar_cmd(p),
        Command::Gauss(GaussCmd::Check { file, fixture, parts, op, restarts }) => {
            gauss_check(file.as_deref(), fixture.as_deref(), parts.as_deref(), *op, *restarts, seed)
        }
        Command::Fixtures => Ok(list_fixtures()),
    }
}

fn list_fixtures() -> Report {
    let mut t = Table::new(&[("name", "str"), ("kind", "str"), ("sha256", "str")]);
    for f in fixtures::FIXTURES {
        t.push(vec![f.name.into(), f.kind.into(), f.digest().into()]);
    }
    Report::table(t)
}

fn entropy_eval(a: &EvalArgs, seed: u64) -> Result<Report> {
    let rho = input::load_state(&a.input)?;
    let sigma = || -> Result<DensityMatrix> {
        let s = a.sigma.as_deref().ok_or_else(|| CliError::invalid(format!("--op {:?} needs --sigma", a.op)))?;
        input::load_state(s)
    };
    let (value, support_violation) = match a.op {
        EntropyOp::Vn => (entropy::von_neumann(&rho), false),
        EntropyOp::Coherence => (entropy::coherence_relative_entropy(&rho), false),
        EntropyOp::Relent => {
            let r = entropy::relative_entropy(&rho, &sigma()?);
            (r.value, r.support_violation)
        }
        EntropyOp::Petz => {
            let r = entropy::petz_divergence(&rho, &sigma()?, a.s)?;
            (r.value, r.support_violation)
        }
        EntropyOp::Sandwiched => {
            let r = entropy::sandwiched_divergence(&rho, &sigma()?, a.s)?;
            (r.value, r.support_violation)
        }
        EntropyOp::ChernoffPhi => (entropy::chernoff_phi(a.s, &rho, &sigma()?)?, false),
        EntropyOp::Measured => {
            let s = sigma()?;
            if !entropy::supported(rho.mat(), s.mat()) {
                (f64::INFINITY, true)
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (entropy::measured_relative_entropy(&rho, &s, a.restarts, 1e-12, &mut rng)?.value, false)
            }
        }
        EntropyOp::Cqmi => (entropy::cqmi(&rho, &a.a, &a.b, &a.c)?, false),
    };
    let flags: Vec<&str> = if support_violation { vec!["support_violation"] } else { vec![] };
    Ok(Report { json_summary: true, ..Report::default() }.with("value", value).with("flags", flags.join(",")))
}

fn mode(m: ExpMode, r: f64) -> Mode {
    match m {
        ExpMode::Chernoff => Mode::Chernoff,
        ExpMode::Stein => Mode::Stein,
        ExpMode::Hoeffding => Mode::Hoeffding(r),
    }
}

fn exponent_report(res: &ExponentResult, table: Option<Table>) -> Report {
    Report { table, ..Report::default() }
        .with("value", res.value)
        .with("infinite", res.infinite)
        .with("argmin_s", res.argmin_s)
}

fn hypo(cmd: &HypoCmd, seed: u64) -> Result<Report> {
    match cmd {
        HypoCmd::Exponent { mode: m, rho, sigma, r } => {
            let (rho, sigma) = (input::load_state(rho)?, input::load_state(sigma)?);
            let res = match m {
                ExpMode::Chernoff => hypotest::chernoff_exponent(&rho, &sigma)?,
                ExpMode::Stein => hypotest::stein_exponent(&rho, &sigma)?,
                ExpMode::Hoeffding => hypotest::hoeffding_exponent(&rho, &sigma, *r)?,
            };
            Ok(exponent_report(&res, None))
        }
        HypoCmd::Power { povm, mode: m, restarts, max_iters, r } => {
            let povm = input::load_povm(povm)?;
            let opts = PowerOptions { restarts: *restarts, max_iters: *max_iters, ..PowerOptions::default() };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let res = hypotest::discrimination_power(&povm, mode(*m, *r), &opts, &mut rng)?;
            let mut t = Table::new(&[("state", "str"), ("row", "int"), ("col", "int"), ("re", "f64"), ("im", "f64")]);
            if let Some((a, b)) = &res.witness {
                for (name, s) in [("rho", a), ("sigma", b)] {
                    let m = s.mat();
                    for i in 0..m.nrows() {
                        for j in 0..m.ncols() {
                            t.push(vec![name.into(), i.into(), j.into(), m[(i, j)].re.into(), m[(i, j)].im.into()]);
                        }
                    }
                }
            }
            Ok(exponent_report(&res, Some(t)))
        }
        HypoCmd::FiniteN { povm, n, pair, cap, max_dim } => {
            let povm = input::load_povm(povm)?;
            let seqs = povm.len().checked_pow(*n as u32).filter(|s| s <= cap);
            if seqs.is_none() {
                return Err(CliError::Cap(format!("{}^{n} outcome sequences exceed --cap {cap}", povm.len())));
            }
            if povm.dim().checked_pow(*n as u32).is_none_or(|d| d > *max_dim) {
                return Err(CliError::Cap(format!("{n} copies of dimension {} exceed --max-dim {max_dim}", povm.dim())));
            }
            let (rho, sigma) = input::pair_from(&Source::open(pair)?)?;
            let rho_n = copies(&rho, *n)?;
            let sigma_n = copies(&sigma, *n)?;
            let p = hypotest::sequence_probabilities(&povm, &rho_n, *n, *cap)?;
            let q = hypotest::sequence_probabilities(&povm, &sigma_n, *n, *cap)?;
            let res = hypotest::finite_n_error(&povm, &rho_n, &sigma_n, *n, *cap)?;
            let mut t = Table::new(&[("sequence", "str"), ("p_rho", "f64"), ("p_sigma", "f64"), ("guess", "str")]);
            for (k, ((a, b), g)) in p.iter().zip(&q).zip(&res.grouping).enumerate() {
                let seq = digits(k, povm.len(), *n);
                t.push(vec![seq.into(), (*a).into(), (*b).into(), if *g { "rho" } else { "sigma" }.into()]);
            }
            Ok(Report::table(t).with("p_err", res.p_err))
        }
    }
}

/// Outcome sequence k in big-endian mixed radix, 1-based effect labels.
fn digits(mut k: usize, base: usize, n: usize) -> String {
    let mut d = vec![0; n];
    for slot in d.iter_mut().rev() {
        *slot = k % base + 1;
        k /= base;
    }
    d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("-")
}

fn copies(states: &[DensityMatrix], n: usize) -> Result<DensityMatrix> {
    match states {
        [one] => Ok(one.tensor_pow(n)),
        many if many.len() == n => {
            Ok(many[1..].iter().fold(many[0].clone(), |acc, s| acc.tensor(s)))
        }
        many => Err(CliError::invalid(format!("pair lists {} states, expected 1 or {n}", many.len()))),
    }
}

fn recover(cmd: &RecoverCmd, seed: u64) -> Result<Report> {
    match cmd {
        RecoverCmd::Scan { family: Family::Ccq, x_from, x_to, steps, restarts, max_iters } => {
            if !(1.0..=9.0).contains(x_from) || !(1.0..=9.0).contains(x_to) || x_from > x_to {
                return Err(CliError::invalid("x range must satisfy 1 ≤ x-from ≤ x-to ≤ 9"));
            }
            if *steps < 1 {
                return Err(CliError::invalid("--steps must be positive"));
            }
            let xs: Vec<f64> = if *steps == 1 {
                vec![*x_from]
            } else {
                (0..*steps).map(|i| x_from + (x_to - x_from) * i as f64 / (*steps - 1) as f64).collect()
            };
            let base = ScanOptions::default();
            let opts = ScanOptions {
                solver: SolverOptions { restarts: *restarts, max_iters: *max_iters, seed, ..base.solver },
                seed,
                ..base
            };
            let rows = recovery::counterexample_scan(&xs, &opts)?;
            let mut t = Table::new(&[
                ("family", "str"),
                ("x", "f64"),
                ("cqmi", "f64"),
                ("d_rec", "f64"),
                ("d_rec_lower", "f64"),
                ("d_m_rec", "f64"),
                ("gap", "f64"),
                ("margin", "f64"),
                ("flag", "bool"),
            ]);
            for r in &rows {
                t.push(vec![
                    r.family.clone().into(),
                    r.x.into(),
                    r.cqmi.into(),
                    r.d_rec.into(),
                    r.d_rec_lower.into(),
                    r.d_m_rec.into(),
                    r.gap.into(),
                    r.margin.into(),
                    r.flag.into(),
                ]);
            }
            let flagged = rows.iter().filter(|r| r.family == "ccq" && r.flag).count();
            let max_gap = rows.iter().map(|r| r.gap).fold(0.0, f64::max);
            Ok(Report::table(t).with("flagged", flagged).with("max_gap", max_gap))
        }
        RecoverCmd::Fidelity { state, side, restarts, max_iters } => {
            let rho = input::load_state(state)?;
            if rho.dims().len() != 3 {
                return Err(CliError::invalid(format!("{state}: need a state on three subsystems (\"dims\")")));
            }
            let side = match side {
                SideArg::A => Side::A,
                SideArg::B => Side::B,
            };
            let opts = SolverOptions { restarts: *restarts, max_iters: *max_iters, seed, ..SolverOptions::default() };
            let r = recovery::fidelity_of_recovery(&rho, side, &opts)?;
            let cqmi = entropy::cqmi(&rho, &[0], &[1], &[2])?;
            Ok(Report::default()
                .with("fidelity", r.fidelity)
                .with("neg_log_f2", -2.0 * r.fidelity.ln())
                .with("petz_fidelity", r.petz_fidelity)
                .with("cqmi", cqmi)
                .with("iterations", r.iterations as usize))
        }
    }
}

fn combine_cmd(cmd: &CombineCmd, seed: u64) -> Result<Report> {
    match cmd {
        CombineCmd::Scan { n, dim, prior, kind } => {
            let prior = match prior {
                PriorArg::Uniform => PriorMode::Uniform,
                PriorArg::Random => PriorMode::Random,
            };
            let kind = match kind {
                KindArg::Mixed => SampleKind::Mixed,
                KindArg::Pure => SampleKind::Pure,
                KindArg::Classical => SampleKind::Classical,
            };
            let (rows, s) = combine::random_cq_scan(*n, *dim, prior, kind, seed)?;
            let mut t = Table::new(&[
                ("prior1", "f64"),
                ("prior2", "f64"),
                ("h1", "f64"),
                ("h2", "f64"),
                ("h_minus", "f64"),
                ("h_plus", "f64"),
                ("classical_mgl", "f64"),
                ("classical_upper", "f64"),
                ("qmgl_two", "f64"),
                ("conj_lower", "f64"),
                ("conj_quantum_branch", "f64"),
                ("violates_proven", "bool"),
                ("violates_conj_lower", "bool"),
                ("violates_conj_upper", "bool"),
            ]);
            for r in &rows {
                t.push(vec![
                    r.prior1.into(),
                    r.prior2.into(),
                    r.h1.into(),
                    r.h2.into(),
                    r.h_minus.into(),
                    r.h_plus.into(),
                    r.classical_mgl.into(),
                    r.classical_upper.into(),
                    r.qmgl_two.into(),
                    r.conj_lower.into(),
                    r.conj_quantum_branch.into(),
                    r.violates_proven.into(),
                    r.violates_conj_lower.into(),
                    r.violates_conj_upper.into(),
                ]);
            }
            Ok(Report::table(t)
                .with("count", s.count)
                .with("proven_violations", s.proven_violations)
                .with("conj_lower_violations", s.conj_lower_violations)
                .with("conj_upper_violations", s.conj_upper_violations)
                .with("max_chain_deviation", s.max_chain_deviation))
        }
        CombineCmd::Bounds { h1, h2 } => {
            let c = combine::conjecture_bounds(*h1, *h2)?;
            Ok(Report::default()
                .with("h1", *h1)
                .with("h2", *h2)
                .with("max_h", h1.max(*h2))
                .with("classical_mgl", combine::classical_mgl(*h1, *h2)?)
                .with("classical_upper", combine::classical_upper(*h1, *h2)?)
                .with("qmgl_two", combine::qmgl_two(*h1, *h2)?)
                .with("conj_lower", c.lower)
                .with("conj_upper", c.upper)
                .with("conj_branch", if c.classical_branch { "classical" } else { "quantum" }))
        }
    }
}

fn limits(l: &PolarLimits) -> Result<(f64, f64, Limits)> {
    let lim = Limits {
        max_depth: l.max_depth,
        dense_cap: l.dense_cap,
        alphabet_cap: l.alphabet_cap,
        quantize: l.quantize,
        ..Limits::default()
    };
    Ok((l.a * LN2, l.b * LN2, lim))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ChannelFile {
    Classical { w0: Vec<f64>, w1: Vec<f64> },
    Cq { out0: MatrixJson, out1: MatrixJson },
}

/// `bec:EPS`, `bsc:P` or `file:PATH` (paths relative to `base`).
fn channel_spec(spec: &str, base: Option<&Path>) -> Result<SynthesizedChannel> {
    let (kind, arg) =
        spec.split_once(':').ok_or_else(|| CliError::invalid(format!("channel {spec:?} is not KIND:ARG")))?;
    let num = || -> Result<f64> { arg.parse().map_err(|_| CliError::invalid(format!("channel {spec:?}: bad number"))) };
    match kind {
        "bec" => Ok(SynthesizedChannel::bec(num()?)?),
        "bsc" => Ok(SynthesizedChannel::bsc(num()?)?),
        "file" | "fixture" => {
            let path = match (kind, base) {
                ("file", Some(b)) if Path::new(arg).is_relative() => b.join(arg).to_string_lossy().into_owned(),
                ("file", _) => arg.to_string(),
                _ => spec.to_string(),
            };
            let src = Source::open(&path)?;
            match input::parse::<ChannelFile>(&src)? {
                ChannelFile::Classical { w0, w1 } => {
                    SynthesizedChannel::classical(&w0, &w1).map_err(|e| src.error_at("w0", e))
                }
                ChannelFile::Cq { out0, out1 } => {
                    let s0 = out0.to_state().map_err(|e| src.error_at("out0", e))?;
                    let s1 = out1.to_state().map_err(|e| src.error_at("out1", e))?;
                    let w = BinaryCqChannel::new(s0, s1).map_err(|e| src.error_at("out0", e))?;
                    Ok(SynthesizedChannel::dense(&w)?)
                }
            }
        }
        _ => Err(CliError::invalid(format!("unknown channel kind {kind:?} (bec, bsc, file)"))),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ChannelList {
    Plain(Vec<String>),
    Repeated { channels: Vec<String>, repeat: usize },
}

fn polar_table(run: &polar::PolarRun) -> Report {
    let mut t = Table::new(&[
        ("n", "int"),
        ("alpha", "f64"),
        ("theta", "f64"),
        ("beta", "f64"),
        ("mu_n", "f64"),
        ("nu_n", "f64"),
    ]);
    for s in &run.levels {
        t.push(vec![s.n.into(), s.alpha.into(), s.theta.into(), s.beta.into(), s.mu_n.into(), s.nu_n.into()]);
    }
    Report::table(t)
        .with("mu_drift", run.mu_drift)
        .with("theta_decreased", run.theta_decreased)
        .with("capacity_fraction", run.capacity_fraction)
}

fn polar_cmd(cmd: &PolarCmd) -> Result<Report> {
    match cmd {
        PolarCmd::Run { channel, depth, limits: l } => {
            let (a, b, lim) = limits(l)?;
            let w = channel_spec(channel, None)?;
            Ok(polar_table(&polar::polarization_run(&w, *depth, a, b, &lim)?))
        }
        PolarCmd::Nonstat { list, depth, limits: l } => {
            let (a, b, lim) = limits(l)?;
            let src = Source::open(list)?;
            let base = Path::new(list).parent();
            let specs = match input::parse::<ChannelList>(&src)? {
                ChannelList::Plain(v) => v,
                ChannelList::Repeated { channels, repeat } => {
                    let n = channels.len().checked_mul(repeat).filter(|&n| n <= 1 << 24);
                    let n = n.ok_or_else(|| CliError::Cap(format!("list of {} × {repeat} channels", channels.len())))?;
                    channels.iter().cycle().take(n).cloned().collect()
                }
            };
            let mut channels = Vec::with_capacity(specs.len());
            for s in &specs {
                channels.push(channel_spec(s, base).map_err(|e| src.error_at("channels", e))?);
            }
            Ok(polar_table(&polar::nonstationary_run(&channels, *depth, a, b, &lim)?))
        }
    }
}

fn labels(v: &CovMatrix) -> Vec<String> {
    v.labels().iter().map(|s| s.to_string()).collect()
}

fn three(v: &CovMatrix, op: &str) -> Result<[String; 3]> {
    let l = labels(v);
    <[String; 3]>::try_from(l.clone())
        .map_err(|_| CliError::invalid(format!("--op {op} needs exactly three parties A,B,C; got {}", l.join(","))))
}

fn quantities(rows: Vec<(String, f64)>) -> Table {
    let mut t = Table::new(&[("quantity", "str"), ("value", "f64")]);
    for (k, v) in rows {
        t.push(vec![k.into(), v.into()]);
    }
    t
}

fn gauss_check(
    file: Option<&str>,
    fixture: Option<&str>,
    parts: Option<&str>,
    op: GaussOp,
    restarts: usize,
    seed: u64,
) -> Result<Report> {
    let parts = parts.map(input::parse_parts).transpose()?;
    // bundled fixtures are taken as printed, user files must be positive definite
    let v = match (file, fixture) {
        (Some(f), _) => input::cov_from(&Source::open(f)?, parts.as_deref(), true)?,
        (None, Some(name)) => input::cov_from(&fixtures::resolve(name)?.source(), parts.as_deref(), false)?,
        (None, None) => return Err(CliError::Usage("one of --file or --fixture is required".into())),
    };
    let l = labels(&v);
    let refs: Vec<&str> = l.iter().map(String::as_str).collect();
    match op {
        GaussOp::Qcm => {
            let r = gausscm::is_qcm(&v);
            let mut rows: Vec<(String, f64)> =
                r.symplectic_eigs.iter().enumerate().map(|(i, n)| (format!("nu_{}", i + 1), *n)).collect();
            rows.push(("purity_defect".into(), r.purity_defect));
            rows.push(("min_eig_uncertainty".into(), r.min_eig_uncertainty));
            Ok(Report::table(quantities(rows)).with("is_qcm", r.is_qcm))
        }
        GaussOp::Ssa => {
            let [a, b, c] = three(&v, "ssa")?;
            let (a, b, c) = (&[a.as_str()][..], &[b.as_str()][..], &[c.as_str()][..]);
            let s = gausscm::ssa_operator_check(&v, a, b, c)?;
            let (via_schur, via_inverse) = gausscm::cmi_identities(&v, a, b, c)?;
            let lb = gausscm::cmi_lower_bound(&v, a, b, c)?;
            let rows = vec![
                ("ssa_min_eig_gap".into(), s.min_eig_gap),
                ("cmi".into(), lb.cmi),
                ("cmi_via_schur".into(), via_schur),
                ("cmi_via_inverse".into(), via_inverse),
                ("cmi_bound1".into(), lb.bound1),
                ("cmi_bound2".into(), lb.bound2),
            ];
            Ok(Report::table(quantities(rows)).with("ssa_holds", s.holds))
        }
        GaussOp::Satur => {
            let [a, b, c] = three(&v, "satur")?;
            let r = gausscm::saturation_tests(&v, &[a.as_str()], &[b.as_str()], &[c.as_str()])?;
            let rows = vec![
                ("cmi".into(), r.cmi),
                ("schur_gap".into(), r.schur_gap),
                ("inverse_offdiag".into(), r.inverse_offdiag),
                ("markov_defect".into(), r.markov_defect),
                ("recovery_error".into(), r.recovery_error),
            ];
            let sat: Vec<String> = r.saturated.iter().map(|b| b.to_string()).collect();
            Ok(Report::table(quantities(rows)).with("saturated", sat.join(";")).with("consistent", r.consistent))
        }
        GaussOp::Petz => {
            let [a, b, c] = three(&v, "petz")?;
            let (a, b, c) = (&[a.as_str()][..], &[b.as_str()][..], &[c.as_str()][..]);
            let tilde = gausscm::petz_recovered(&v, a, b, c)?;
            let ordered = v.marginal(&[a[0], b[0], c[0]])?;
            let rows = vec![
                ("cmi".into(), gausscm::logdet_cmi(&v, a, b, c)?),
                ("recovery_error".into(), (&tilde - ordered.mat()).amax()),
                ("fidelity".into(), gausscm::gaussian_fidelity(ordered.mat(), &tilde)?),
                ("rel_ent".into(), gausscm::gaussian_rel_ent(ordered.mat(), &tilde)?),
            ];
            Ok(Report::table(quantities(rows)))
        }
        GaussOp::Steer => {
            let (a, others) = refs.split_first().expect("at least one party");
            let m = gausscm::steer_monogamy(&v, a, others)?;
            let joined = others.concat();
            let mut rows = vec![(format!("G({a}>{joined})"), m.a_steers)];
            rows.extend(others.iter().zip(&m.a_steers_parts).map(|(b, g)| (format!("G({a}>{b})"), *g)));
            rows.push((format!("gap({a}>{})", others.join(",")), m.a_steers_gap));
            rows.push((format!("G({joined}>{a})"), m.a_steered));
            rows.extend(others.iter().zip(&m.a_steered_parts).map(|(b, g)| (format!("G({b}>{a})"), *g)));
            rows.push((format!("gap({}>{a})", others.join(",")), m.a_steered_gap));
            let nu_min = gausscm::symplectic_eigs(&v).first().copied().unwrap_or(f64::NAN);
            Ok(Report::table(quantities(rows))
                .with("nu_min", nu_min)
                .with("steered_gap_guaranteed", m.a_steered_guaranteed))
        }
        GaussOp::Eof => {
            let [a, b] = <[&str; 2]>::try_from(refs.clone())
                .map_err(|_| CliError::invalid(format!("--op eof needs exactly two parties; got {}", l.join(","))))?;
            let r = gausscm::renyi2_eof_bounds(&v, &[a], &[b], restarts, seed)?;
            let rows = vec![
                ("upper_gamma_sharp".into(), r.upper_gamma_sharp),
                ("optimized".into(), r.optimized),
                ("half_mi".into(), r.half_mi),
                ("steerability".into(), r.steerability),
            ];
            Ok(Report::table(quantities(rows)).with("hierarchy_ok", r.hierarchy_ok))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::output::Cell;

    #[test]
    fn sequences_are_big_endian() {
        assert_eq!(digits(0, 2, 3), "1-1-1");
        assert_eq!(digits(1, 2, 3), "1-1-2");
        assert_eq!(digits(6, 2, 3), "2-2-1");
    }

    #[test]
    fn channel_specs() {
        assert!((channel_spec("bec:0.5", None).unwrap().entropy() - 0.5 * LN2).abs() < 1e-12);
        assert!(channel_spec("bsc:0.11", None).is_ok());
        assert!(channel_spec("bec", None).is_err());
        assert!(channel_spec("bec:x", None).is_err());
        assert!(channel_spec("awgn:1", None).is_err());
    }

    #[test]
    fn fixture_steer_rows() {
        let r = gauss_check(None, Some("gmono8x8"), None, GaussOp::Steer, 1, 0).unwrap();
        let t = r.table.unwrap();
        let gap = t.rows.iter().find(|row| row[0] == Cell::S("gap(B1,B2>A)".into())).unwrap();
        match gap[1] {
            Cell::F(x) => assert!((x + 0.816863).abs() < 1e-4, "{x}"),
            _ => panic!("numeric gap"),
        }
    }
}
