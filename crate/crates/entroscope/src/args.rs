use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug, Serialize)]
#[command(name = "entroscope", version, about = "Entropy, recoverability and Gaussian covariance numerics")]
pub struct Cli {
    /// Seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Output file (stdout if absent).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<std::path::PathBuf>,
    /// Emit one JSON document instead of CSV and text.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub json: bool,
    /// Worker threads; overrides ENTROSCOPE_THREADS.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Entropies and divergences of states.
    #[command(subcommand)]
    Entropy(EntropyCmd),
    /// Error exponents and finite-n discrimination.
    #[command(subcommand)]
    Hypo(HypoCmd),
    /// Recoverability scans and fidelity of recovery.
    #[command(subcommand)]
    Recover(RecoverCmd),
    /// Information-combining scans and bounds.
    #[command(subcommand)]
    Combine(CombineCmd),
    /// Polarization of synthesized channels.
    #[command(subcommand)]
    Polar(PolarCmd),
    /// Covariance-matrix checks.
    #[command(subcommand)]
    Gauss(GaussCmd),
    /// List the bundled fixtures with their digests.
    Fixtures,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntropyCmd {
    Eval(EvalArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum EntropyOp {
    /// von Neumann entropy
    Vn,
    /// relative entropy D(ρ‖σ)
    Relent,
    /// Petz-Rényi divergence of order s
    Petz,
    /// sandwiched Rényi divergence of order s
    Sandwiched,
    /// ln Tr ρ^s σ^(1-s)
    ChernoffPhi,
    /// measured relative entropy
    Measured,
    /// conditional mutual information I(A:B|C)
    Cqmi,
    /// relative entropy of coherence
    Coherence,
}

#[derive(Args, Debug, Serialize)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub op: EntropyOp,
    /// State file (or fixture:NAME).
    #[arg(long = "in")]
    pub input: String,
    #[arg(long)]
    pub sigma: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    pub s: f64,
    /// Subsystems for cqmi, 0-based and comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0usize])]
    pub a: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [1usize])]
    pub b: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [2usize])]
    pub c: Vec<usize>,
    /// Random starts for the measured relative entropy.
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ExpMode {
    Chernoff,
    Stein,
    Hoeffding,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypoCmd {
    /// Exponent of a fixed pair of states.
    Exponent {
        #[arg(long, value_enum)]
        mode: ExpMode,
        #[arg(long)]
        rho: String,
        #[arg(long)]
        sigma: String,
        /// Rate for the Hoeffding exponent.
        #[arg(short = 'r', long = "rate", default_value_t = 0.0)]
        r: f64,
    },
    /// Discrimination power of a POVM, with the optimal pair as witness rows.
    Power {
        #[arg(long)]
        povm: String,
        #[arg(long, value_enum)]
        mode: ExpMode,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 4000)]
        max_iters: u64,
        #[arg(short = 'r', long = "rate", default_value_t = 0.0)]
        r: f64,
    },
    /// Exact error of n measurements with the optimal grouping of outcome sequences.
    FiniteN {
        #[arg(long)]
        povm: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        pair: String,
        /// Largest number of outcome sequences to enumerate.
        #[arg(long, default_value_t = hypotest::DEFAULT_SEQUENCE_CAP)]
        cap: usize,
        /// Largest joint dimension of the n copies.
        #[arg(long, default_value_t = 1024)]
        max_dim: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Ccq,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum SideArg {
    A,
    B,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecoverCmd {
    /// Scan the violation family over an x grid.
    Scan {
        #[arg(long, value_enum, default_value_t = Family::Ccq)]
        family: Family,
        #[arg(long, default_value_t = 1.0)]
        x_from: f64,
        #[arg(long, default_value_t = 9.0)]
        x_to: f64,
        #[arg(long, default_value_t = 64)]
        steps: usize,
        #[arg(long, default_value_t = 2)]
        restarts: usize,
        #[arg(long, default_value_t = 4000)]
        max_iters: u64,
    },
    /// Optimized fidelity of recovery of a three-party state.
    Fidelity {
        #[arg(long)]
        state: String,
        /// Which of the first two parties is regenerated from C.
        #[arg(long, value_enum, default_value_t = SideArg::A)]
        side: SideArg,
        #[arg(long, default_value_t = 2)]
        restarts: usize,
        #[arg(long, default_value_t = 4000)]
        max_iters: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum PriorArg {
    Uniform,
    Random,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    Mixed,
    Pure,
    Classical,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CombineCmd {
    /// Random channel pairs tabulated against every bound.
    Scan {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = PriorArg::Uniform)]
        prior: PriorArg,
        #[arg(long, value_enum, default_value_t = KindArg::Mixed)]
        kind: KindArg,
    },
    /// Bounds on H(X₁+X₂|B₁B₂) for given channel entropies (nats).
    Bounds {
        #[arg(long)]
        h1: f64,
        #[arg(long)]
        h2: f64,
    },
}

#[derive(Args, Debug, Serialize)]
pub struct PolarLimits {
    /// Thresholds as fractions of ln 2.
    #[arg(long, default_value_t = 0.05)]
    pub a: f64,
    #[arg(long, default_value_t = 0.95)]
    pub b: f64,
    /// Largest depth accepted.
    #[arg(long, default_value_t = 22)]
    pub max_depth: usize,
    /// Largest output dimension of one dense block.
    #[arg(long, default_value_t = 4096)]
    pub dense_cap: usize,
    /// Largest classical alphabet.
    #[arg(long, default_value_t = 1 << 22)]
    pub alphabet_cap: usize,
    /// Pool symmetric components into this many entropy bins.
    #[arg(long)]
    pub quantize: Option<usize>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolarCmd {
    /// Stationary tree of one channel.
    Run {
        /// bec:EPS, bsc:P or file:PATH.
        #[arg(long)]
        channel: String,
        #[arg(long, default_value_t = 16)]
        depth: usize,
        #[command(flatten)]
        limits: PolarLimits,
    },
    /// Non-stationary list of channels.
    Nonstat {
        /// JSON array of channel specs, or {"channels": [...], "repeat": k}.
        #[arg(long)]
        list: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[command(flatten)]
        limits: PolarLimits,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum GaussOp {
    /// symplectic spectrum and QCM test
    Qcm,
    /// operator strong subadditivity and the CMI identities
    Ssa,
    /// saturation conditions of I(A:B|C) = 0
    Satur,
    /// Gaussian Petz recovery of A from C
    Petz,
    /// steering terms and monogamy gaps
    Steer,
    /// Rényi-2 entanglement of formation bounds
    Eof,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GaussCmd {
    Check {
        /// Covariance JSON {"mat", "parts", "order"}.
        #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
        file: Option<String>,
        #[arg(long)]
        fixture: Option<String>,
        /// Party layout, e.g. A:2,B:1,C:1; replaces the file's own.
        #[arg(long)]
        parts: Option<String>,
        #[arg(long, value_enum)]
        op: GaussOp,
        /// Restarts for the EoF search.
        #[arg(long, default_value_t = 8)]
        restarts: usize,
    },
}
