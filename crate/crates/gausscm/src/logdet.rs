use serde::Serialize;

use crate::cov::CovMatrix;
use crate::mat::{self, Mat};
use crate::{GaussError, Result};

/// `M(V) = ½ ln det V`.
pub fn logdet_entropy(v: &CovMatrix) -> Result<f64> {
    Ok(0.5 * mat::logdet(v.mat())?)
}

fn m_of(v: &CovMatrix, labels: &[&str]) -> Result<f64> {
    let idx = v.indices(labels)?;
    Ok(0.5 * mat::logdet(&mat::sub(v.mat(), &idx, &idx))?)
}

fn join<'a>(a: &[&'a str], b: &[&'a str]) -> Vec<&'a str> {
    a.iter().chain(b).copied().collect()
}

fn disjoint(groups: &[&[&str]]) -> Result<()> {
    let all: Vec<&str> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    for (i, l) in all.iter().enumerate() {
        if all[..i].contains(l) {
            return Err(GaussError::Argument(format!("party {l:?} appears in two groups")));
        }
    }
    if groups.iter().take(2).any(|g| g.is_empty()) {
        return Err(GaussError::Argument("empty party group".into()));
    }
    Ok(())
}

/// `I_M(A:B) = M(V_A) + M(V_B) − M(V_AB)`.
pub fn logdet_mi(v: &CovMatrix, a: &[&str], b: &[&str]) -> Result<f64> {
    disjoint(&[a, b])?;
    Ok(m_of(v, a)? + m_of(v, b)? - m_of(v, &join(a, b))?)
}

/// `I_M(A:B|C) = M(V_AC) + M(V_BC) − M(V_C) − M(V_ABC)`.
pub fn logdet_cmi(v: &CovMatrix, a: &[&str], b: &[&str], c: &[&str]) -> Result<f64> {
    disjoint(&[a, b, c])?;
    let abc = join(&join(a, b), c);
    Ok(m_of(v, &join(a, c))? + m_of(v, &join(b, c))? - m_of(v, c)? - m_of(v, &abc)?)
}

/// The conditional mutual information evaluated two other ways: as the
/// mutual information of `V_ABC / V_C`, and of the AB block of `V_ABC⁻¹`.
pub fn cmi_identities(v: &CovMatrix, a: &[&str], b: &[&str], c: &[&str]) -> Result<(f64, f64)> {
    disjoint(&[a, b, c])?;
    let abc = v.marginal(&join(&join(a, b), c))?;
    let conditioned = if c.is_empty() { abc.clone() } else { abc.schur(c)? };
    let via_schur = logdet_mi(&conditioned, a, b)?;
    let inv = abc.with_mat(mat::inverse(abc.mat())?)?;
    let via_inverse = logdet_mi(&inv.marginal(&join(a, b))?, a, b)?;
    Ok((via_schur, via_inverse))
}

#[derive(Clone, Debug, Serialize)]
pub struct SsaReport {
    /// Smallest eigenvalue of `V_AC/V_C − V_ABC/V_BC`.
    pub min_eig_gap: f64,
    pub holds: bool,
}

/// Operator form of strong subadditivity on the A block.
pub fn ssa_operator_check(v: &CovMatrix, a: &[&str], b: &[&str], c: &[&str]) -> Result<SsaReport> {
    disjoint(&[a, b, c])?;
    let abc = v.marginal(&join(&join(a, b), c))?;
    let big = abc.schur(&join(b, c))?;
    let small = if c.is_empty() { abc.marginal(a)? } else { abc.marginal(&join(a, c))?.schur(c)? };
    let e = mat::min_eig(&(small.mat() - big.mat()));
    Ok(SsaReport { min_eig_gap: e, holds: e >= -1e-9 })
}

#[derive(Clone, Debug, Serialize)]
pub struct CmiBounds {
    pub cmi: f64,
    /// `½ Tr[(V_AC/V_C)⁻¹ Δ (V_BC/V_C)⁻¹ Δᵀ]` with `Δ = X − Y C⁻¹ Zᵀ`.
    pub bound1: f64,
    /// `½ ‖V_A^{-½} Δ V_B^{-½}‖²` (Frobenius).
    pub bound2: f64,
}

pub(crate) struct Blocks {
    pub a: Mat,
    pub b: Mat,
    pub c: Mat,
    pub x: Mat,
    pub y: Mat,
    pub z: Mat,
}

pub(crate) fn blocks(v: &CovMatrix, a: &[&str], b: &[&str], c: &[&str]) -> Result<Blocks> {
    disjoint(&[a, b, c])?;
    Ok(Blocks {
        a: v.block(a, a)?,
        b: v.block(b, b)?,
        c: v.block(c, c)?,
        x: v.block(a, b)?,
        y: v.block(a, c)?,
        z: v.block(b, c)?,
    })
}

impl Blocks {
    /// `X − Y C⁻¹ Zᵀ`, zero exactly on Markov instances.
    pub fn delta(&self) -> Result<Mat> {
        if self.c.is_empty() {
            return Ok(self.x.clone());
        }
        Ok(&self.x - &self.y * mat::inverse(&self.c)? * self.z.transpose())
    }

    pub fn cond(&self, side: &Mat, cross: &Mat) -> Result<Mat> {
        if self.c.is_empty() {
            return Ok(side.clone());
        }
        Ok(mat::symmetrize(&(side - cross * mat::inverse(&self.c)? * cross.transpose())))
    }
}

pub fn cmi_lower_bound(v: &CovMatrix, a: &[&str], b: &[&str], c: &[&str]) -> Result<CmiBounds> {
    let k = blocks(v, a, b, c)?;
    let d = k.delta()?;
    let ac = mat::inverse(&k.cond(&k.a, &k.y)?)?;
    let bc = mat::inverse(&k.cond(&k.b, &k.z)?)?;
    let bound1 = 0.5 * (ac * &d * bc * d.transpose()).trace();
    let w = mat::sym_pow(&k.a, -0.5)? * &d * mat::sym_pow(&k.b, -0.5)?;
    Ok(CmiBounds { cmi: logdet_cmi(v, a, b, c)?, bound1, bound2: 0.5 * w.norm_squared() })
}

/// `D(A‖B) = ½ ln(det B / det A) + ½ Tr(B⁻¹A) − n/2` between centred normals.
pub fn gaussian_rel_ent(a: &Mat, b: &Mat) -> Result<f64> {
    same_shape(a, b)?;
    let n = a.nrows() as f64;
    let bi = mat::inverse(b)?;
    Ok(0.5 * (mat::logdet(b)? - mat::logdet(a)?) + 0.5 * (bi * a).trace() - 0.5 * n)
}

/// Fidelity `F` of centred normals, `F² = det(A!B) / √(det A det B)` with
/// the harmonic mean `A!B = 2(A⁻¹ + B⁻¹)⁻¹`.
pub fn gaussian_fidelity(a: &Mat, b: &Mat) -> Result<f64> {
    same_shape(a, b)?;
    let h = mat::inverse(&(mat::inverse(a)? + mat::inverse(b)?))? * 2.0;
    let ln_f2 = mat::logdet(&h)? - 0.5 * (mat::logdet(a)? + mat::logdet(b)?);
    Ok((0.5 * ln_f2).exp())
}

fn same_shape(a: &Mat, b: &Mat) -> Result<()> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(GaussError::Shape(format!("{:?} against {:?}", a.shape(), b.shape())));
    }
    Ok(())
}
