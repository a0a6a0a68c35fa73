use numkernel::{eigvalsh, hermitize, identity, ptrace, CMat, Complex64, EIG_TOL};

use crate::{RecoveryError, Result};

const PSD_TOL: f64 = 1e-9;
const TP_TOL: f64 = 1e-8;

/// Choi matrix J = Σᵢⱼ |i⟩⟨j| ⊗ R(|i⟩⟨j|) on in ⊗ out.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    mat: CMat,
    dim_in: usize,
    dim_out: usize,
}

impl ChoiMatrix {
    /// Validates complete positivity and trace preservation.
    pub fn new(mat: CMat, dim_in: usize, dim_out: usize) -> Result<Self> {
        let c = Self::unchecked(mat, dim_in, dim_out)?;
        let lo = eigvalsh(&c.mat)[0];
        if lo < -PSD_TOL {
            return Err(RecoveryError::InvalidChoi(format!("negative eigenvalue {lo:.3e}")));
        }
        let dev = c.tp_deviation();
        if dev > TP_TOL {
            return Err(RecoveryError::InvalidChoi(format!("partial trace deviates from identity by {dev:.3e}")));
        }
        Ok(c)
    }

    pub(crate) fn unchecked(mat: CMat, dim_in: usize, dim_out: usize) -> Result<Self> {
        if mat.nrows() != dim_in * dim_out || mat.ncols() != dim_in * dim_out {
            return Err(numkernel::KernelError::Dimension(format!(
                "{}x{} is not {dim_in}·{dim_out}",
                mat.nrows(),
                mat.ncols()
            ))
            .into());
        }
        Ok(Self { mat: hermitize(&mat), dim_in, dim_out })
    }

    /// Σₖ |Aₖ⟩⟩⟨⟨Aₖ| with |A⟩⟩ = Σᵢ |i⟩ ⊗ A|i⟩.
    pub fn from_kraus(kraus: &[CMat]) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| RecoveryError::Argument("no Kraus operators".into()))?;
        let (dout, din) = first.shape();
        let mut j = CMat::zeros(din * dout, din * dout);
        for a in kraus {
            let v = CMat::from_fn(din * dout, 1, |r, _| a[(r % dout, r / dout)]);
            j += &v * v.adjoint();
        }
        Self::unchecked(j, din, dout)
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    /// ‖Tr_out J − 1‖ (largest entry).
    pub fn tp_deviation(&self) -> f64 {
        let t = ptrace(&self.mat, &[self.dim_in, self.dim_out], &[0]).expect("consistent dims");
        (t - identity(self.dim_in)).camax()
    }

    pub fn is_cp(&self) -> bool {
        eigvalsh(&self.mat)[0] >= -PSD_TOL
    }

    /// ⟨i|J|j⟩ over the input, i.e. R(|i⟩⟨j|).
    pub(crate) fn block(&self, i: usize, j: usize) -> CMat {
        let d = self.dim_out;
        self.mat.view((i * d, j * d), (d, d)).into_owned()
    }

    /// (1_Y ⊗ R)(W) for W on Y ⊗ in.
    pub fn apply(&self, w: &CMat, dy: usize) -> Result<CMat> {
        let din = self.dim_in;
        if w.nrows() != dy * din {
            return Err(numkernel::KernelError::Dimension(format!("input {} is not {dy}·{din}", w.nrows())).into());
        }
        let dout = self.dim_out;
        let mut out = CMat::zeros(dy * dout, dy * dout);
        for i in 0..din {
            for j in 0..din {
                let b = CMat::from_fn(dy, dy, |y, z| w[(y * din + i, z * din + j)]);
                if b.iter().all(|z| z.norm_sqr() == 0.0) {
                    continue;
                }
                out += numkernel::tensor(&b, &self.block(i, j));
            }
        }
        Ok(out)
    }

    /// (1 − ε) R + ε · (Tr(·) 1/d_out).
    pub fn depolarized(&self, eps: f64) -> Self {
        let dep = numkernel::tensor(&identity(self.dim_in), &identity(self.dim_out)).unscale(self.dim_out as f64);
        Self { mat: self.mat.scale(1.0 - eps) + dep.scale(eps), dim_in: self.dim_in, dim_out: self.dim_out }
    }

    /// Kraus operators from the eigendecomposition (eigenvalues above EIG_TOL).
    pub fn kraus(&self) -> Vec<CMat> {
        let (vals, u) = numkernel::eigh(&self.mat);
        let (din, dout) = (self.dim_in, self.dim_out);
        vals.iter()
            .enumerate()
            .filter(|(_, &v)| v > EIG_TOL)
            .map(|(k, &v)| {
                let s = Complex64::from(v.sqrt());
                CMat::from_fn(dout, din, |o, i| u[(i * dout + o, k)] * s)
            })
            .collect()
    }
}
