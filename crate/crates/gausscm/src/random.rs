//! Samplers for test and scan inputs.
//!
//! `random_qcm` draws `V = S D Sᵀ` where `S = exp(ΩH)` for a symmetric `H`
//! with independent N(0, s²) entries (s = 0.4 on and above the diagonal) and
//! `D` holds symplectic eigenvalues drawn uniformly from `[1, ν_max]`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::cov::{party_name, quadratures, CovMatrix, QuadratureOrder};
use crate::mat::{self, Mat};

const GENERATOR_SCALE: f64 = 0.4;

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn parts(modes: &[usize]) -> Vec<(String, usize)> {
    modes.iter().enumerate().map(|(i, &n)| (party_name(i), n)).collect()
}

/// Wishart-like positive definite matrix `GGᵀ/d + 0.05 I`, not necessarily a QCM.
pub fn random_positive<R: Rng + ?Sized>(rng: &mut R, modes: &[usize]) -> CovMatrix {
    let d = 2 * modes.iter().sum::<usize>();
    let g = Mat::from_fn(d, d, |_, _| normal(rng));
    let m = &g * g.transpose() / d as f64 + Mat::identity(d, d) * 0.05;
    CovMatrix::new(m, parts(modes), QuadratureOrder::Interleaved).expect("sampled matrix is positive definite")
}

/// `exp(ΩH)` with random symmetric `H`.
pub fn random_symplectic<R: Rng + ?Sized>(rng: &mut R, omega: &Mat, scale: f64) -> Mat {
    let d = omega.nrows();
    let mut h = Mat::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let x = scale * normal(rng);
            h[(i, j)] = x;
            h[(j, i)] = x;
        }
    }
    (omega * h).exp()
}

fn with_spectrum<R: Rng + ?Sized>(rng: &mut R, modes: &[usize], order: QuadratureOrder, nu: &[f64]) -> CovMatrix {
    let d = 2 * nu.len();
    let skeleton = CovMatrix::new(Mat::identity(d, d), parts(modes), order).expect("identity is valid");
    let s = random_symplectic(rng, &skeleton.omega(), GENERATOR_SCALE);
    let mut diag = Mat::zeros(d, d);
    for (&(x, p), &v) in quadratures(&modes.to_vec(), order).iter().zip(nu) {
        diag[(x, x)] = v;
        diag[(p, p)] = v;
    }
    skeleton.with_mat(mat::symmetrize(&(&s * diag * s.transpose()))).expect("congruence keeps shape")
}

pub fn random_qcm<R: Rng + ?Sized>(rng: &mut R, modes: &[usize], nu_max: f64) -> CovMatrix {
    random_qcm_ordered(rng, modes, QuadratureOrder::Interleaved, nu_max)
}

pub fn random_qcm_ordered<R: Rng + ?Sized>(
    rng: &mut R,
    modes: &[usize],
    order: QuadratureOrder,
    nu_max: f64,
) -> CovMatrix {
    let n: usize = modes.iter().sum();
    let nu: Vec<f64> = (0..n).map(|_| rng.random_range(1.0..=nu_max.max(1.0))).collect();
    with_spectrum(rng, modes, order, &nu)
}

pub fn random_pure_qcm<R: Rng + ?Sized>(rng: &mut R, modes: &[usize]) -> CovMatrix {
    let n: usize = modes.iter().sum();
    with_spectrum(rng, modes, QuadratureOrder::Interleaved, &vec![1.0; n])
}

/// Random positive matrix on parties A, B, C with `X = Y C⁻¹ Zᵀ`.
pub fn random_markov<R: Rng + ?Sized>(rng: &mut R, modes: &[usize; 3]) -> CovMatrix {
    let v = random_positive(rng, modes);
    let tilde = crate::petz::petz_recovered(&v, &["A"], &["B"], &["C"]).expect("positive input");
    v.with_mat(tilde).expect("same layout")
}
