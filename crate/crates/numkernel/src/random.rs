//! Random matrices. Every sampler takes the RNG explicitly.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c64, hermitize, trace};
use crate::{CMat, DensityMatrix};

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMat {
    hermitize(&ginibre(rng, d, d))
}

/// T T† / Tr(T T†) with T a d × k Ginibre matrix (induced measure).
pub fn random_state_mat<R: Rng + ?Sized>(rng: &mut R, d: usize, k: usize) -> CMat {
    let t = ginibre(rng, d, k);
    let m = &t * t.adjoint();
    let tr = trace(&m).re;
    hermitize(&m.unscale(tr))
}

pub fn random_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DensityMatrix {
    DensityMatrix::from_matrix_unchecked(random_state_mat(rng, d, d), vec![d])
}

pub fn random_ket<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DVector<Complex> {
    let g = ginibre(rng, d, 1);
    let v = DVector::from_iterator(d, g.iter().copied());
    let n = v.norm();
    v.unscale(n)
}

type Complex = num_complex::Complex64;

/// Haar unitary from the QR decomposition of a Ginibre matrix with the
/// phase correction of Mezzadri.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMat {
    let qr = ginibre(rng, d, d).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let rjj = r[(j, j)];
        let ph = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { c64(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// POVM with `m` effects from normalized Wishart operators.
pub fn random_povm<R: Rng + ?Sized>(rng: &mut R, d: usize, m: usize) -> crate::Povm {
    let ops = (0..m)
        .map(|_| {
            let g = ginibre(rng, d, d);
            hermitize(&(&g * g.adjoint()))
        })
        .collect();
    crate::Povm::from_unnormalized(ops).expect("Wishart sum is full rank almost surely")
}
