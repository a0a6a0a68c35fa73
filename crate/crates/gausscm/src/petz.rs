use serde::Serialize;

use crate::cov::CovMatrix;
use crate::logdet::{blocks, logdet_cmi};
use crate::mat::{self, Mat};
use crate::{GaussError, Result};

/// Classical Gaussian channel `V ↦ H V Hᵀ + K`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianChannel {
    h: Mat,
    k: Mat,
}

impl GaussianChannel {
    pub fn new(h: Mat, k: Mat) -> Result<Self> {
        if k.nrows() != h.nrows() || k.ncols() != h.nrows() {
            return Err(GaussError::Shape(format!("H is {:?} but K is {:?}", h.shape(), k.shape())));
        }
        let e = mat::min_eig(&k);
        if e < -1e-10 || mat::asymmetry(&k) > crate::SYM_TOL {
            return Err(GaussError::NotPositive(format!("noise matrix, minimum eigenvalue {e:.3e}")));
        }
        Ok(Self { h, k: mat::symmetrize(&k) })
    }

    pub fn identity(d: usize) -> Self {
        Self { h: Mat::identity(d, d), k: Mat::zeros(d, d) }
    }

    pub fn h(&self) -> &Mat {
        &self.h
    }

    pub fn k(&self) -> &Mat {
        &self.k
    }

    pub fn apply(&self, v: &Mat) -> Result<Mat> {
        if v.nrows() != self.h.ncols() || v.ncols() != self.h.ncols() {
            return Err(GaussError::Shape(format!("channel takes {} rows, got {:?}", self.h.ncols(), v.shape())));
        }
        Ok(mat::symmetrize(&(&self.h * v * self.h.transpose() + &self.k)))
    }
}

/// Recovery `AC → ABC` with `H = [[I,0],[0,ZC⁻¹],[0,I]]` and
/// `K = 0 ⊕ (B − ZC⁻¹Zᵀ) ⊕ 0`. Input rows are ordered A then C, output A, B, C.
pub fn gaussian_petz(v: &CovMatrix, a: &[&str], b: &[&str], c: &[&str]) -> Result<GaussianChannel> {
    if c.is_empty() {
        return Err(GaussError::Argument("recovery needs a nonempty conditioning party".into()));
    }
    let k = blocks(v, a, b, c)?;
    let (na, nb, nc) = (k.a.nrows(), k.b.nrows(), k.c.nrows());
    let zc = &k.z * mat::inverse(&k.c)?;
    let mut h = Mat::zeros(na + nb + nc, na + nc);
    h.view_mut((0, 0), (na, na)).fill_with_identity();
    h.view_mut((na, na), (nb, nc)).copy_from(&zc);
    h.view_mut((na + nb, na), (nc, nc)).fill_with_identity();
    let mut noise = Mat::zeros(na + nb + nc, na + nb + nc);
    noise.view_mut((na, na), (nb, nb)).copy_from(&mat::symmetrize(&(&k.b - &zc * k.z.transpose())));
    GaussianChannel::new(h, noise)
}

/// The recovered matrix `Ṽ_ABC`, ordered A, B, C.
pub fn petz_recovered(v: &CovMatrix, a: &[&str], b: &[&str], c: &[&str]) -> Result<Mat> {
    let ac: Vec<&str> = a.iter().chain(c).copied().collect();
    gaussian_petz(v, a, b, c)?.apply(&v.block(&ac, &ac)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct SaturationReport {
    pub cmi: f64,
    /// Max entry of `V_AC/V_C − V_ABC/V_BC`.
    pub schur_gap: f64,
    /// Max entry of the AB block of `V⁻¹`.
    pub inverse_offdiag: f64,
    /// Max entry of `X − Y C⁻¹ Zᵀ`.
    pub markov_defect: f64,
    /// Max entry of `Ṽ − V`.
    pub recovery_error: f64,
    /// The five conditions in the order above.
    pub saturated: [bool; 5],
    pub consistent: bool,
}

const SAT_CMI: f64 = 1e-10;
const SAT_MAT: f64 = 1e-7;

/// Evaluates the five equivalent characterisations of `I_M(A:B|C) = 0`.
pub fn saturation_tests(v: &CovMatrix, a: &[&str], b: &[&str], c: &[&str]) -> Result<SaturationReport> {
    let abc: Vec<&str> = a.iter().chain(b).chain(c).copied().collect();
    let w = v.marginal(&abc)?;
    let bc: Vec<&str> = b.iter().chain(c).copied().collect();
    let ac: Vec<&str> = a.iter().chain(c).copied().collect();
    let schur_gap = (w.marginal(&ac)?.schur(c)?.mat() - w.schur(&bc)?.mat()).amax();
    let inv = w.with_mat(mat::inverse(w.mat())?)?;
    let inverse_offdiag = inv.block(a, b)?.amax();
    let markov_defect = blocks(&w, a, b, c)?.delta()?.amax();
    let recovery_error = (petz_recovered(&w, a, b, c)? - w.mat()).amax();
    let cmi = logdet_cmi(&w, a, b, c)?;
    let saturated = [
        cmi.abs() <= SAT_CMI,
        schur_gap <= SAT_MAT,
        inverse_offdiag <= SAT_MAT,
        markov_defect <= SAT_MAT,
        recovery_error <= SAT_MAT,
    ];
    let consistent = saturated.iter().all(|&s| s == saturated[0]);
    Ok(SaturationReport { cmi, schur_gap, inverse_offdiag, markov_defect, recovery_error, saturated, consistent })
}

/// Post-measurement matrix `(V + 0 ⊕ σ) / (V_M + σ)` when the rows `measured`
/// of `v` are measured with seed `sigma`.
pub fn measurement_update(v: &Mat, measured: &[usize], sigma: &Mat) -> Result<Mat> {
    if sigma.nrows() != measured.len() || sigma.ncols() != measured.len() {
        return Err(GaussError::Shape(format!("seed is {:?} for {} rows", sigma.shape(), measured.len())));
    }
    let rest: Vec<usize> = (0..v.nrows()).filter(|i| !measured.contains(i)).collect();
    let mut w = v.clone();
    for (i, &r) in measured.iter().enumerate() {
        for (j, &c) in measured.iter().enumerate() {
            w[(r, c)] += sigma[(i, j)];
        }
    }
    mat::schur(&w, measured, &rest)
}

/// Non-deterministic classical map `V_B ↦ γ_B' − δᵀ(γ_B + V_B)⁻¹δ` applied to
/// the last `gamma_in` rows of `v`. `gamma` is ordered B then B'; the result
/// keeps the untouched rows of `v` first and puts B' last.
pub fn nondeterministic_apply(gamma: &Mat, gamma_in: usize, v: &Mat) -> Result<Mat> {
    let nb = gamma_in;
    let nb_out = gamma.nrows().checked_sub(nb).ok_or_else(|| GaussError::Shape("γ smaller than B".into()))?;
    if v.nrows() < nb {
        return Err(GaussError::Shape(format!("input has {} rows, map expects {nb}", v.nrows())));
    }
    let na = v.nrows() - nb;
    let d = na + nb + nb_out;
    let mut w = Mat::zeros(d, d);
    w.view_mut((0, 0), (na + nb, na + nb)).copy_from(v);
    let mut g = w.view_mut((na, na), (nb + nb_out, nb + nb_out));
    g += gamma;
    let keep: Vec<usize> = (0..na).chain(na + nb..d).collect();
    mat::schur(&w, &(na..na + nb).collect::<Vec<_>>(), &keep)
}
