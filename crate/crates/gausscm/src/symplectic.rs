use nalgebra::Complex;
use numkernel::{eigh, from_real, CMat};
use serde::Serialize;

use crate::cov::CovMatrix;
use crate::mat::{self, Mat};
use crate::{GaussError, Result};

const QCM_TOL: f64 = 1e-8;

/// Symplectic eigenvalues `ν₁ ≤ … ≤ νₙ`, the moduli of the eigenvalues of
/// `iΩV` with each ± pair counted once.
///
/// Positive definite inputs go through the Hermitian matrix `V^{½}(iΩ)V^{½}`;
/// anything else falls back to a general eigensolve of `ΩV`.
pub fn symplectic_eigs(v: &CovMatrix) -> Vec<f64> {
    symplectic_eigs_with(v.mat(), &v.omega())
}

pub(crate) fn symplectic_eigs_with(v: &Mat, omega: &Mat) -> Vec<f64> {
    let mut moduli: Vec<f64> = if mat::min_eig(v) > crate::PD_TOL {
        let h = mat::sym_sqrt(v);
        let m = from_real(&(&h * omega * &h)) * Complex::new(0.0, 1.0);
        numkernel::eigvalsh(&m).into_iter().map(f64::abs).collect()
    } else {
        (omega * v).complex_eigenvalues().iter().map(|z| z.norm()).collect()
    };
    moduli.sort_by(f64::total_cmp);
    moduli.into_iter().step_by(2).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct QcmReport {
    pub is_qcm: bool,
    pub symplectic_eigs: Vec<f64>,
    /// `Πνᵢ − 1`, zero for pure states.
    pub purity_defect: f64,
    /// Smallest eigenvalue of `V + iΩ`, the direct form of the uncertainty relation.
    pub min_eig_uncertainty: f64,
}

/// An indefinite matrix is never a QCM, whatever its symplectic moduli.
pub fn is_qcm(v: &CovMatrix) -> QcmReport {
    let nu = symplectic_eigs(v);
    let herm = from_real(v.mat()) + from_real(&v.omega()) * Complex::new(0.0, 1.0);
    QcmReport {
        is_qcm: v.is_positive_definite() && nu.first().is_none_or(|&m| m >= 1.0 - QCM_TOL),
        purity_defect: nu.iter().product::<f64>() - 1.0,
        min_eig_uncertainty: numkernel::min_eig(&herm),
        symplectic_eigs: nu,
    }
}

pub(crate) fn require_qcm(v: &CovMatrix) -> Result<QcmReport> {
    let r = is_qcm(v);
    if !r.is_qcm {
        return Err(GaussError::NotQcm(format!("minimum symplectic eigenvalue {:.6}", r.symplectic_eigs[0])));
    }
    Ok(r)
}

/// `V = S D Sᵀ` with `S` symplectic and `D` carrying `νⱼ` on both
/// quadratures of mode j.
#[derive(Clone, Debug)]
pub struct Williamson {
    pub s: Mat,
    pub nu: Vec<f64>,
}

impl Williamson {
    pub fn diagonal(&self, v: &CovMatrix) -> Mat {
        let mut d = Mat::zeros(v.dim(), v.dim());
        for (&(x, p), &n) in v.quadratures().iter().zip(&self.nu) {
            d[(x, x)] = n;
            d[(p, p)] = n;
        }
        d
    }
}

pub fn williamson(v: &CovMatrix) -> Result<Williamson> {
    mat::require_pd(v.mat(), "Williamson decomposition")?;
    let inv_half = mat::sym_pow(v.mat(), -0.5)?;
    let k = &inv_half * v.omega() * &inv_half;
    // iK is Hermitian with eigenvalues ±1/νⱼ
    let (vals, vecs): (Vec<f64>, CMat) = eigh(&(from_real(&k) * Complex::new(0.0, 1.0)));
    let n = v.modes();
    let d = v.dim();
    let mut o = Mat::zeros(d, d);
    let mut nu = Vec::with_capacity(n);
    let quads = v.quadratures();
    // largest 1/ν first, so ν comes out ascending
    for (j, col) in (0..d).rev().take(n).enumerate() {
        let u = vecs.column(col);
        let (x, p) = quads[j];
        let s2 = std::f64::consts::SQRT_2;
        o.column_mut(x).copy_from(&u.map(|z| z.im * s2));
        o.column_mut(p).copy_from(&u.map(|z| z.re * s2));
        nu.push(1.0 / vals[col]);
    }
    let mut dm = Mat::zeros(d, d);
    for (&(x, p), &n) in quads.iter().zip(&nu) {
        dm[(x, x)] = n.powf(-0.5);
        dm[(p, p)] = n.powf(-0.5);
    }
    Ok(Williamson { s: mat::sym_sqrt(v.mat()) * o * dm, nu })
}

/// `γ# = V # (Ω V⁻¹ Ωᵀ)`, a pure QCM below `V` whenever `V` is a QCM.
pub fn gamma_sharp(v: &CovMatrix) -> Result<CovMatrix> {
    let w = v.omega();
    let other = &w * mat::inverse(v.mat())? * w.transpose();
    v.with_mat(mat::geometric_mean(v.mat(), &mat::symmetrize(&other))?)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GValues {
    pub g_plus: f64,
    pub g_minus: f64,
}

/// `g± = Σ max(±ln νᵢ, 0)`.
pub fn g_functions(v: &CovMatrix) -> GValues {
    let nu = symplectic_eigs(v);
    GValues {
        g_plus: nu.iter().map(|n| n.ln().max(0.0)).sum(),
        g_minus: nu.iter().map(|n| (-n.ln()).max(0.0)).sum(),
    }
}

/// Pure extension of `v` by a party "E" with as many modes as `v`, built
/// from two-mode squeezed blocks in the Williamson frame.
pub fn purification(v: &CovMatrix) -> Result<CovMatrix> {
    require_qcm(v)?;
    let wd = williamson(v)?;
    let mut parts = v.parts().to_vec();
    let mut label = "E".to_string();
    while parts.iter().any(|p| p.0 == label) {
        label.push('\'');
    }
    parts.push((label, v.modes()));
    let d = v.dim();
    let skeleton = CovMatrix::symmetric(Mat::identity(2 * d, 2 * d), parts, v.order())?;
    let quads = skeleton.quadratures();
    let n = v.modes();
    let mut core = Mat::zeros(2 * d, 2 * d);
    for j in 0..n {
        let nu = wd.nu[j].max(1.0);
        let c = (nu * nu - 1.0).sqrt();
        let ((x, p), (xe, pe)) = (quads[j], quads[n + j]);
        for (a, b, s) in [(x, xe, 1.0), (p, pe, -1.0)] {
            core[(a, a)] = nu;
            core[(b, b)] = nu;
            core[(a, b)] = s * c;
            core[(b, a)] = s * c;
        }
    }
    let lift = mat::direct_sum(&[&wd.s, &Mat::identity(d, d)]);
    skeleton.with_mat(mat::symmetrize(&(&lift * core * lift.transpose())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cov::QuadratureOrder;
    use crate::random::{random_pure_qcm, random_qcm, random_qcm_ordered};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag(entries: &[f64]) -> Mat {
        Mat::from_diagonal(&nalgebra::DVector::from_vec(entries.to_vec()))
    }

    #[test]
    fn vacuum_and_thermal() {
        let v = CovMatrix::single(Mat::identity(4, 4)).unwrap();
        let r = is_qcm(&v);
        assert!(r.is_qcm && r.purity_defect.abs() < 1e-12);
        assert!(r.symplectic_eigs.iter().all(|n| (n - 1.0).abs() < 1e-12));
        let t = CovMatrix::single(diag(&[3.0, 3.0])).unwrap();
        assert!((symplectic_eigs(&t)[0] - 3.0).abs() < 1e-12);
        assert!((gamma_sharp(&t).unwrap().mat() - Mat::identity(2, 2)).amax() < 1e-12);
        let g = g_functions(&CovMatrix::single(diag(&[4.0, 4.0])).unwrap());
        assert!((g.g_plus - 4f64.ln()).abs() < 1e-12 && g.g_minus == 0.0);
    }

    #[test]
    fn squeezed_vacuum_is_pure() {
        let v = CovMatrix::single(diag(&[5.0, 0.2])).unwrap();
        assert!((symplectic_eigs(&v)[0] - 1.0).abs() < 1e-12);
        let g = g_functions(&v);
        assert!(g.g_plus.abs() < 1e-12 && g.g_minus.abs() < 1e-12);
        assert!((gamma_sharp(&v).unwrap().mat() - v.mat()).amax() < 1e-10);
    }

    #[test]
    fn too_small_is_not_qcm() {
        let v = CovMatrix::single(diag(&[0.5, 0.5])).unwrap();
        let r = is_qcm(&v);
        assert!(!r.is_qcm && r.min_eig_uncertainty < 0.0);
        assert!(purification(&v).is_err());
    }

    #[test]
    fn determinant_is_product_of_nu_squared() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for order in [QuadratureOrder::Interleaved, QuadratureOrder::Blocked] {
            for _ in 0..20 {
                let v = random_qcm_ordered(&mut rng, &[2, 1], order, 3.0);
                let nu = symplectic_eigs(&v);
                let ln = 2.0 * nu.iter().map(|n| n.ln()).sum::<f64>();
                assert!((ln - mat::logdet(v.mat()).unwrap()).abs() < 1e-6);
                let r = is_qcm(&v);
                assert!(r.is_qcm && r.min_eig_uncertainty > -1e-8);
            }
        }
    }

    #[test]
    fn williamson_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let v = random_qcm(&mut rng, &[1, 2], 4.0);
            let w = williamson(&v).unwrap();
            let om = v.omega();
            assert!((&w.s * &om * w.s.transpose() - &om).amax() < 1e-8);
            assert!((&w.s * w.diagonal(&v) * w.s.transpose() - v.mat()).amax() < 1e-8);
            let nu = symplectic_eigs(&v);
            assert!(nu.iter().zip(&w.nu).all(|(a, b)| (a - b).abs() < 1e-8));
        }
    }

    #[test]
    fn gamma_sharp_is_pure_and_below() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..20 {
            let v = random_qcm(&mut rng, &[1, 1], 3.0);
            let g = gamma_sharp(&v).unwrap();
            assert!(symplectic_eigs(&g).iter().all(|n| (n - 1.0).abs() < 1e-7));
            assert!(mat::min_eig(&(v.mat() - g.mat())) > -1e-9);
        }
    }

    #[test]
    fn g_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let v = crate::random::random_positive(&mut rng, &[2]);
            let g = g_functions(&v);
            assert!((g.g_plus - g.g_minus - 0.5 * mat::logdet(v.mat()).unwrap()).abs() < 1e-8);
            let inv = v.with_mat(mat::inverse(v.mat()).unwrap()).unwrap();
            assert!((g_functions(&inv).g_minus - g.g_plus).abs() < 1e-8);
        }
    }

    #[test]
    fn purification_is_pure_extension() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for order in [QuadratureOrder::Interleaved, QuadratureOrder::Blocked] {
            let v = random_qcm_ordered(&mut rng, &[1, 1], order, 3.0);
            let p = purification(&v).unwrap();
            assert!(symplectic_eigs(&p).iter().all(|n| (n - 1.0).abs() < 1e-7));
            assert!((p.marginal(&["A", "B"]).unwrap().mat() - v.mat()).amax() < 1e-9);
        }
        let pure = random_pure_qcm(&mut rng, &[1, 1]);
        assert!(purification(&pure).is_ok());
    }
}
