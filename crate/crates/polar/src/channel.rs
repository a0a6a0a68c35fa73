use combine::BinaryCqChannel;
use numkernel::{eigh, eigvalsh, CMat, LN2};

use crate::{PolarError, Result};

const MERGE_TOL: f64 = 1e-12;

/// Size limits applied to every synthesis step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Limits {
    /// Largest tree depth a run may request.
    pub max_depth: usize,
    /// Largest output dimension of a single flag block in dense mode.
    pub dense_cap: usize,
    /// Largest number of stored complex entries across all dense blocks.
    pub dense_storage: usize,
    /// Largest classical output alphabet before merging.
    pub alphabet_cap: usize,
    /// Opt-in bound on the number of components of a symmetric classical channel.
    /// Components beyond it are pooled in equal-width entropy bins, each pool
    /// replaced by one BSC of the same total entropy. Off by default.
    pub quantize: Option<usize>,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_depth: 22, dense_cap: 4096, dense_storage: 1 << 24, alphabet_cap: 1 << 22, quantize: None }
    }
}

fn xlnx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

fn h2(p: f64) -> f64 {
    -xlnx(p) - xlnx(1.0 - p)
}

/// Classical channel with uniform input. A symmetric channel is kept as a
/// mixture of BSCs with a flag known to the receiver, stored as
/// (weight, crossover ≤ ½); any other channel as likelihood pairs
/// (W(y|0), W(y|1)). Both forms merge symbols that are equivalent within 1e-12.
#[derive(Clone, Debug, PartialEq)]
pub enum ClassicalChannel {
    Symmetric(Vec<[f64; 2]>),
    Table(Vec<[f64; 2]>),
}

fn merge_sorted(mut w: Vec<[f64; 2]>, key: impl Fn(&[f64; 2]) -> f64, weight: impl Fn(&[f64; 2]) -> f64) -> Vec<[f64; 2]> {
    w.retain(|p| weight(p) > 0.0);
    w.sort_by(|a, b| key(a).total_cmp(&key(b)));
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(w.len());
    let mut anchor = f64::NAN;
    for p in w {
        let r = key(&p);
        match out.last_mut() {
            Some(last) if (r - anchor).abs() <= MERGE_TOL => {
                last[0] += p[0];
                last[1] += p[1];
            }
            _ => {
                anchor = r;
                out.push(p);
            }
        }
    }
    out
}

fn posterior(p: &[f64; 2]) -> f64 {
    p[0] / (p[0] + p[1])
}

fn merge_table(w: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    merge_sorted(w, posterior, |p| p[0] + p[1])
}

fn merge_mixture(w: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    // the weight is not part of the key, so merged weights add and the crossover is kept
    let mut out = merge_sorted(w.iter().map(|c| [c[0], c[0] * c[1]]).collect(), |c| c[1] / c[0], |c| c[0]);
    for c in &mut out {
        c[1] /= c[0];
    }
    out
}

fn quantize_mixture(m: Vec<[f64; 2]>, budget: Option<usize>) -> Vec<[f64; 2]> {
    let Some(budget) = budget else { return m };
    if m.len() <= budget {
        return m;
    }
    let bins = budget.max(3) - 2;
    let mut pools = vec![[0.0f64; 2]; bins];
    let mut out = Vec::with_capacity(budget);
    for c in m {
        if c[1] == 0.0 || c[1] == 0.5 {
            out.push(c);
            continue;
        }
        let h = h2(c[1]);
        let k = ((h / LN2 * bins as f64) as usize).min(bins - 1);
        pools[k][0] += c[0];
        pools[k][1] += c[0] * h;
    }
    for [q, qh] in pools {
        if q > 0.0 {
            let p = entropy::binary_entropy_inv((qh / q).min(LN2)).expect("pooled entropy lies in [0, ln2]");
            out.push([q, p]);
        }
    }
    merge_mixture(out)
}

/// Mixture form of a merged table when it is invariant under relabelling the input.
fn as_mixture(w: &[[f64; 2]]) -> Option<Vec<[f64; 2]>> {
    let n = w.len();
    let mut comps = Vec::with_capacity(n / 2 + 1);
    for i in 0..n.div_ceil(2) {
        let (a, b) = (w[i], w[n - 1 - i]);
        if (a[0] - b[1]).abs() > MERGE_TOL || (a[1] - b[0]).abs() > MERGE_TOL {
            return None;
        }
        let t = a[0] + a[1];
        let cross = a[0].min(a[1]) / t;
        comps.push([if i == n - 1 - i { 0.5 * t } else { t }, cross]);
    }
    Some(merge_mixture(comps))
}

impl ClassicalChannel {
    pub fn new(w0: &[f64], w1: &[f64]) -> Result<Self> {
        if w0.len() != w1.len() || w0.is_empty() {
            return Err(PolarError::Argument("transition rows must be nonempty and of equal length".into()));
        }
        for row in [w0, w1] {
            let s: f64 = row.iter().sum();
            if row.iter().any(|p| !(*p >= 0.0)) || (s - 1.0).abs() > 1e-9 {
                return Err(PolarError::Argument("transition rows must be probability vectors".into()));
            }
        }
        let table = merge_table(w0.iter().zip(w1).map(|(a, b)| [*a, *b]).collect());
        Ok(match as_mixture(&table) {
            Some(m) => Self::Symmetric(m),
            None => Self::Table(table),
        })
    }

    pub fn bec(eps: f64) -> Result<Self> {
        check_param(eps)?;
        Ok(Self::Symmetric(merge_mixture(vec![[1.0 - eps, 0.0], [eps, 0.5]])))
    }

    pub fn bsc(p: f64) -> Result<Self> {
        check_param(p)?;
        Ok(Self::Symmetric(vec![[1.0, p.min(1.0 - p)]]))
    }

    /// Likelihood pairs (W(y|0), W(y|1)).
    pub fn symbols(&self) -> Vec<[f64; 2]> {
        match self {
            Self::Table(w) => w.clone(),
            Self::Symmetric(m) => m.iter().flat_map(|c| [[c[0] * (1.0 - c[1]), c[0] * c[1]], [c[0] * c[1], c[0] * (1.0 - c[1])]]).collect(),
        }
    }

    /// Number of stored components.
    pub fn alphabet(&self) -> usize {
        match self {
            Self::Table(w) | Self::Symmetric(w) => w.len(),
        }
    }

    pub fn entropy(&self) -> f64 {
        let h: f64 = match self {
            Self::Table(w) => w.iter().map(|p| 0.5 * (p[0] + p[1]) * h2(posterior(p))).sum(),
            Self::Symmetric(m) => m.iter().map(|c| c[0] * h2(c[1])).sum(),
        };
        h.clamp(0.0, LN2)
    }

    fn check_size(&self, other: &Self, factor: usize, limits: &Limits) -> Result<()> {
        let n = self.alphabet().saturating_mul(other.alphabet()).saturating_mul(factor);
        if n > limits.alphabet_cap {
            return Err(PolarError::Cap(format!(
                "classical alphabet {n} exceeds cap {}; reduce depth or use BEC mode",
                limits.alphabet_cap
            )));
        }
        Ok(())
    }

    pub fn minus(&self, other: &Self, limits: &Limits) -> Result<Self> {
        self.check_size(other, 1, limits)?;
        if let (Self::Symmetric(x), Self::Symmetric(y)) = (self, other) {
            let mut m = Vec::with_capacity(x.len() * y.len());
            for a in x {
                for b in y {
                    m.push([a[0] * b[0], a[1] * (1.0 - b[1]) + b[1] * (1.0 - a[1])]);
                }
            }
            return Ok(Self::Symmetric(quantize_mixture(merge_mixture(m), limits.quantize)));
        }
        let mut w = Vec::with_capacity(self.alphabet() * other.alphabet() * 4);
        for a in &self.symbols() {
            for b in &other.symbols() {
                w.push([0.5 * (a[0] * b[0] + a[1] * b[1]), 0.5 * (a[1] * b[0] + a[0] * b[1])]);
            }
        }
        Ok(Self::Table(merge_table(w)))
    }

    pub fn plus(&self, other: &Self, limits: &Limits) -> Result<Self> {
        self.check_size(other, 2, limits)?;
        if let (Self::Symmetric(x), Self::Symmetric(y)) = (self, other) {
            let mut m = Vec::with_capacity(2 * x.len() * y.len());
            for a in x {
                for b in y {
                    let (p, q) = (a[1], b[1]);
                    let agree = (1.0 - p) * (1.0 - q) + p * q;
                    let differ = p * (1.0 - q) + q * (1.0 - p);
                    if agree > 0.0 {
                        m.push([a[0] * b[0] * agree, p * q / agree]);
                    }
                    if differ > 0.0 {
                        m.push([a[0] * b[0] * differ, (p * (1.0 - q)).min(q * (1.0 - p)) / differ]);
                    }
                }
            }
            return Ok(Self::Symmetric(quantize_mixture(merge_mixture(m), limits.quantize)));
        }
        let mut w = Vec::with_capacity(8 * self.alphabet() * other.alphabet());
        for a in &self.symbols() {
            for b in &other.symbols() {
                w.push([0.5 * a[0] * b[0], 0.5 * a[1] * b[1]]);
                w.push([0.5 * a[1] * b[0], 0.5 * a[0] * b[1]]);
            }
        }
        Ok(Self::Table(merge_table(w)))
    }
}

fn check_param(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(PolarError::Argument(format!("channel parameter {p} outside [0, 1]")));
    }
    Ok(())
}

/// Uniform-input cq channel whose outputs are block diagonal, ρ_x = ⊕_k B_{x,k},
/// with the block label known to the receiver. Each block is kept as a factor V
/// with B = V V†.
#[derive(Clone, Debug)]
pub struct DenseChannel {
    dim: usize,
    blocks: Vec<[CMat; 2]>,
}

fn psd_factor(m: &CMat) -> CMat {
    let (vals, vecs) = eigh(m);
    let top = vals.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > 1e-15 * top.max(1e-300)).collect();
    let mut v = CMat::zeros(m.nrows(), keep.len());
    for (c, &i) in keep.iter().enumerate() {
        v.set_column(c, &vecs.column(i).scale(vals[i].sqrt()));
    }
    v
}

fn compress(v: CMat) -> CMat {
    if v.ncols() > v.nrows() {
        psd_factor(&(&v * v.adjoint()))
    } else {
        v
    }
}

/// −Tr B ln B for B = V V†, via whichever Gram matrix is smaller.
fn factor_entropy(v: &CMat) -> f64 {
    if v.ncols() == 0 {
        return 0.0;
    }
    let g = if v.ncols() <= v.nrows() { v.adjoint() * v } else { v * v.adjoint() };
    -eigvalsh(&g).into_iter().map(xlnx).sum::<f64>()
}

fn hstack(parts: &[CMat]) -> CMat {
    let rows = parts[0].nrows();
    let cols = parts.iter().map(|p| p.ncols()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut c = 0;
    for p in parts {
        out.view_mut((0, c), (rows, p.ncols())).copy_from(p);
        c += p.ncols();
    }
    out
}

impl DenseChannel {
    pub fn from_cq(w: &BinaryCqChannel) -> Result<Self> {
        if !w.is_uniform() {
            return Err(PolarError::Argument("polarization needs a uniform input prior".into()));
        }
        Ok(Self { dim: w.dim(), blocks: vec![[psd_factor(w.out(0).mat()), psd_factor(w.out(1).mat())]] })
    }

    /// Exact embedding of a classical channel: one one-dimensional block per output symbol.
    pub fn from_classical(c: &ClassicalChannel) -> Self {
        let one = |p: f64| CMat::from_element(1, 1, numkernel::c64(p.sqrt(), 0.0));
        Self { dim: 1, blocks: c.symbols().iter().map(|p| [one(p[0]), one(p[1])]).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Full output state ρ_x as a dense matrix of size (blocks · dim).
    pub fn output(&self, x: usize) -> CMat {
        let n = self.blocks.len() * self.dim;
        let mut m = CMat::zeros(n, n);
        for (k, b) in self.blocks.iter().enumerate() {
            m.view_mut((k * self.dim, k * self.dim), (self.dim, self.dim)).copy_from(&(&b[x] * b[x].adjoint()));
        }
        m
    }

    pub fn entropy(&self) -> f64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut h = LN2;
        for b in &self.blocks {
            h += 0.5 * (factor_entropy(&b[0]) + factor_entropy(&b[1]));
            h -= factor_entropy(&hstack(&[b[0].scale(s), b[1].scale(s)]));
        }
        h.clamp(0.0, LN2)
    }

    fn check_size(&self, other: &Self, blocks: usize, limits: &Limits) -> Result<()> {
        let dim = self.dim * other.dim;
        if dim > limits.dense_cap {
            return Err(PolarError::Cap(format!(
                "dense block dimension {dim} exceeds cap {}; use classical or BEC mode",
                limits.dense_cap
            )));
        }
        let storage = blocks.saturating_mul(dim).saturating_mul(dim);
        if storage > limits.dense_storage {
            return Err(PolarError::Cap(format!(
                "dense storage {storage} exceeds cap {}; use classical or BEC mode",
                limits.dense_storage
            )));
        }
        Ok(())
    }

    pub fn minus(&self, other: &Self, limits: &Limits) -> Result<Self> {
        self.check_size(other, self.blocks.len() * other.blocks.len(), limits)?;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut blocks = Vec::with_capacity(self.blocks.len() * other.blocks.len());
        for a in &self.blocks {
            for b in &other.blocks {
                let out = |u: usize| {
                    let parts: Vec<CMat> = (0..2).map(|u2| a[u ^ u2].kronecker(&b[u2]).scale(s)).collect();
                    compress(hstack(&parts))
                };
                blocks.push([out(0), out(1)]);
            }
        }
        Ok(Self { dim: self.dim * other.dim, blocks })
    }

    pub fn plus(&self, other: &Self, limits: &Limits) -> Result<Self> {
        self.check_size(other, 2 * self.blocks.len() * other.blocks.len(), limits)?;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut blocks = Vec::with_capacity(2 * self.blocks.len() * other.blocks.len());
        for u1 in 0..2 {
            for a in &self.blocks {
                for b in &other.blocks {
                    let out = |u2: usize| a[u1 ^ u2].kronecker(&b[u2]).scale(s);
                    let blk = [out(0), out(1)];
                    if blk[0].ncols() + blk[1].ncols() > 0 {
                        blocks.push(blk);
                    }
                }
            }
        }
        Ok(Self { dim: self.dim * other.dim, blocks })
    }
}

/// Channel representation; operations promote BEC → classical → dense as needed.
#[derive(Clone, Debug)]
pub enum Representation {
    Bec(f64),
    Classical(ClassicalChannel),
    Dense(DenseChannel),
}

impl Representation {
    fn rank(&self) -> u8 {
        match self {
            Self::Bec(_) => 0,
            Self::Classical(_) => 1,
            Self::Dense(_) => 2,
        }
    }

    fn to_classical(&self) -> Option<ClassicalChannel> {
        match self {
            Self::Bec(e) => Some(ClassicalChannel::bec(*e).expect("stored erasure probability is valid")),
            Self::Classical(c) => Some(c.clone()),
            Self::Dense(_) => None,
        }
    }

    fn to_dense(&self) -> DenseChannel {
        match self {
            Self::Dense(d) => d.clone(),
            other => DenseChannel::from_classical(&other.to_classical().expect("non-dense is classical")),
        }
    }

    pub fn entropy(&self) -> f64 {
        match self {
            Self::Bec(e) => e * LN2,
            Self::Classical(c) => c.entropy(),
            Self::Dense(d) => d.entropy(),
        }
    }
}

/// A channel W^{s} obtained from base channels along the ±-string s.
#[derive(Clone, Debug)]
pub struct SynthesizedChannel {
    pub representation: Representation,
    pub path: String,
}

impl SynthesizedChannel {
    pub fn new(representation: Representation) -> Self {
        Self { representation, path: String::new() }
    }

    pub fn bec(eps: f64) -> Result<Self> {
        check_param(eps)?;
        Ok(Self::new(Representation::Bec(eps)))
    }

    pub fn bsc(p: f64) -> Result<Self> {
        Ok(Self::new(Representation::Classical(ClassicalChannel::bsc(p)?)))
    }

    pub fn classical(w0: &[f64], w1: &[f64]) -> Result<Self> {
        Ok(Self::new(Representation::Classical(ClassicalChannel::new(w0, w1)?)))
    }

    pub fn dense(w: &BinaryCqChannel) -> Result<Self> {
        Ok(Self::new(Representation::Dense(DenseChannel::from_cq(w)?)))
    }

    pub fn depth(&self) -> usize {
        self.path.len()
    }

    /// H(X|B) in nats.
    pub fn entropy(&self) -> f64 {
        self.representation.entropy()
    }

    /// I = ln2 − H.
    pub fn information(&self) -> f64 {
        LN2 - self.entropy()
    }

    fn combine(&self, other: &Self, plus: bool, limits: &Limits) -> Result<Self> {
        use Representation::*;
        let representation = match self.representation.rank().max(other.representation.rank()) {
            0 => {
                let (Bec(a), Bec(b)) = (&self.representation, &other.representation) else { unreachable!() };
                Bec(if plus { a * b } else { a + b - a * b })
            }
            1 => {
                let a = self.representation.to_classical().expect("classical");
                let b = other.representation.to_classical().expect("classical");
                Classical(if plus { a.plus(&b, limits)? } else { a.minus(&b, limits)? })
            }
            _ => {
                let a = self.representation.to_dense();
                let b = other.representation.to_dense();
                Dense(if plus { a.plus(&b, limits)? } else { a.minus(&b, limits)? })
            }
        };
        let mut path = self.path.clone();
        path.push(if plus { '+' } else { '-' });
        Ok(Self { representation, path })
    }

    /// ⟨self, other⟩⁻ = self ⊞ other.
    pub fn minus(&self, other: &Self, limits: &Limits) -> Result<Self> {
        self.combine(other, false, limits)
    }

    /// ⟨self, other⟩⁺ = self ⊛ other.
    pub fn plus(&self, other: &Self, limits: &Limits) -> Result<Self> {
        self.combine(other, true, limits)
    }
}

/// Applies the ±-string to two copies of the channel at every step.
pub fn synthesize(w: &SynthesizedChannel, path: &str, limits: &Limits) -> Result<SynthesizedChannel> {
    if path.len() > limits.max_depth {
        return Err(PolarError::Cap(format!("depth {} exceeds cap {}", path.len(), limits.max_depth)));
    }
    let mut cur = w.clone();
    for c in path.chars() {
        cur = match c {
            '-' => cur.minus(&cur, limits)?,
            '+' => cur.plus(&cur, limits)?,
            _ => return Err(PolarError::Argument(format!("path symbol {c:?} is not + or -"))),
        };
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use combine::{box_combine, channel_entropy, varo_combine};
    use numkernel::random::random_state;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_channel(seed: u64, d: usize) -> BinaryCqChannel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        BinaryCqChannel::new(random_state(&mut rng, d), random_state(&mut rng, d)).unwrap()
    }

    #[test]
    fn empty_path_is_identity() {
        let w = SynthesizedChannel::bsc(0.11).unwrap();
        let s = synthesize(&w, "", &Limits::default()).unwrap();
        assert_eq!(s.depth(), 0);
        assert!((s.entropy() - w.entropy()).abs() < 1e-15);
    }

    #[test]
    fn bec_closed_form() {
        let l = Limits::default();
        let w = SynthesizedChannel::bec(0.3).unwrap();
        let Representation::Bec(m) = synthesize(&w, "-", &l).unwrap().representation else { panic!() };
        let Representation::Bec(p) = synthesize(&w, "+", &l).unwrap().representation else { panic!() };
        assert!((m - 0.51).abs() < 1e-15 && (p - 0.09).abs() < 1e-15);
    }

    #[test]
    fn bec_matches_classical_and_dense() {
        let l = Limits::default();
        let bec = SynthesizedChannel::bec(0.3).unwrap();
        let cl = SynthesizedChannel::new(Representation::Classical(ClassicalChannel::bec(0.3).unwrap()));
        let dn = SynthesizedChannel::dense(&BinaryCqChannel::bec(0.3).unwrap()).unwrap();
        for path in ["-", "+", "-+", "+-", "--", "++", "-+-", "+++"] {
            let h = synthesize(&bec, path, &l).unwrap().entropy();
            assert!((synthesize(&cl, path, &l).unwrap().entropy() - h).abs() < 1e-12, "{path}");
            if path.len() <= 2 {
                assert!((synthesize(&dn, path, &l).unwrap().entropy() - h).abs() < 1e-10, "{path}");
            }
        }
    }

    #[test]
    fn dense_matches_full_combination() {
        let l = Limits::default();
        for (seed, d) in [(1, 2), (2, 3)] {
            let (a, b) = (random_channel(seed, d), random_channel(seed + 10, d));
            let (sa, sb) = (SynthesizedChannel::dense(&a).unwrap(), SynthesizedChannel::dense(&b).unwrap());
            assert!((sa.entropy() - channel_entropy(&a)).abs() < 1e-10);
            let hm = channel_entropy(&box_combine(&a, &b).unwrap());
            let hp = channel_entropy(&varo_combine(&a, &b).unwrap());
            assert!((sa.minus(&sb, &l).unwrap().entropy() - hm).abs() < 1e-10);
            assert!((sa.plus(&sb, &l).unwrap().entropy() - hp).abs() < 1e-10);
        }
    }

    #[test]
    fn dense_output_is_flagged_state() {
        let l = Limits::default();
        let a = random_channel(3, 2);
        let s = SynthesizedChannel::dense(&a).unwrap();
        let Representation::Dense(p) = s.plus(&s, &l).unwrap().representation else { panic!() };
        let full = varo_combine(&a, &a).unwrap();
        for x in 0..2 {
            assert!((p.output(x) - full.out(x).mat()).norm() < 1e-12);
        }
    }

    #[test]
    fn bsc_classical_matches_dense() {
        let l = Limits::default();
        let c = SynthesizedChannel::bsc(0.11).unwrap();
        let d = SynthesizedChannel::dense(&BinaryCqChannel::bsc(0.11).unwrap()).unwrap();
        for path in ["-+", "+-", "--", "++"] {
            let hc = synthesize(&c, path, &l).unwrap().entropy();
            assert!((synthesize(&d, path, &l).unwrap().entropy() - hc).abs() < 1e-10);
        }
    }

    #[test]
    fn merging_keeps_alphabet_small() {
        let l = Limits::default();
        let w = SynthesizedChannel::new(Representation::Classical(ClassicalChannel::bec(0.4).unwrap()));
        let Representation::Classical(c) = synthesize(&w, "-+-+-+", &l).unwrap().representation else { panic!() };
        assert_eq!(c.alphabet(), 2);
        // asymmetric table stays a table and keeps proportional symbols merged
        let z = ClassicalChannel::new(&[0.5, 0.25, 0.25], &[0.2, 0.1, 0.7]).unwrap();
        assert!(matches!(z, ClassicalChannel::Table(ref w) if w.len() == 2));
        let zz = z.minus(&z, &l).unwrap();
        assert!(matches!(zz, ClassicalChannel::Table(_)));
    }

    #[test]
    fn symmetric_form_matches_table() {
        let l = Limits::default();
        let w0 = [0.5, 0.2, 0.2, 0.1];
        let w1 = [0.1, 0.2, 0.2, 0.5];
        let sym = ClassicalChannel::new(&w0, &w1).unwrap();
        assert!(matches!(sym, ClassicalChannel::Symmetric(_)));
        let tab = ClassicalChannel::Table(merge_table(w0.iter().zip(&w1).map(|(a, b)| [*a, *b]).collect()));
        assert!((sym.entropy() - tab.entropy()).abs() < 1e-15);
        let (mut s, mut t) = (sym.clone(), tab.clone());
        for plus in [false, true, true, false] {
            (s, t) = if plus { (s.plus(&s, &l).unwrap(), t.plus(&t, &l).unwrap()) } else { (s.minus(&s, &l).unwrap(), t.minus(&t, &l).unwrap()) };
            assert!((s.entropy() - t.entropy()).abs() < 1e-12);
        }
        assert!(matches!(s, ClassicalChannel::Symmetric(_)));
    }

    #[test]
    fn quantized_mixture_keeps_entropy() {
        let l = Limits::default();
        let q = Limits { quantize: Some(64), ..l };
        let w = SynthesizedChannel::bsc(0.11).unwrap();
        let exact = synthesize(&w, "+-+-+", &l).unwrap();
        let coarse = synthesize(&w, "+-+-+", &q).unwrap();
        let Representation::Classical(c) = &coarse.representation else { panic!() };
        assert!(c.alphabet() <= 64);
        assert!((exact.entropy() - coarse.entropy()).abs() < 1e-3);
        let one = ClassicalChannel::Symmetric(merge_mixture((1..200).map(|i| [1.0 / 199.0, i as f64 / 400.0]).collect()));
        let pooled = ClassicalChannel::Symmetric(quantize_mixture(match &one { ClassicalChannel::Symmetric(m) => m.clone(), _ => unreachable!() }, Some(10)));
        assert!(pooled.alphabet() <= 10);
        assert!((pooled.entropy() - one.entropy()).abs() < 1e-14);
    }

    #[test]
    fn caps_are_enforced() {
        let l = Limits { dense_cap: 16, ..Limits::default() };
        let d = SynthesizedChannel::dense(&random_channel(4, 2)).unwrap();
        assert!(synthesize(&d, "--", &l).is_ok());
        assert!(matches!(synthesize(&d, "---", &l), Err(PolarError::Cap(_))));
        assert!(synthesize(&d, "-x", &l).is_err());
        assert!(SynthesizedChannel::bec(1.5).is_err());
        let tight = Limits { alphabet_cap: 8, ..Limits::default() };
        assert!(matches!(synthesize(&SynthesizedChannel::bsc(0.1).unwrap(), "+++", &tight), Err(PolarError::Cap(_))));
    }

    #[test]
    fn nonuniform_prior_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w = BinaryCqChannel::with_prior(random_state(&mut rng, 2), random_state(&mut rng, 2), 0.3).unwrap();
        assert!(SynthesizedChannel::dense(&w).is_err());
    }
}
