//! Real symmetric matrix helpers.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::{GaussError, Result};

pub type Mat = DMatrix<f64>;

pub fn symmetrize(m: &Mat) -> Mat {
    (m + m.transpose()) * 0.5
}

pub fn asymmetry(m: &Mat) -> f64 {
    (m - m.transpose()).amax()
}

/// `U f(Λ) Uᵀ` for symmetric `m`.
pub fn sym_map(m: &Mat, f: impl Fn(f64) -> f64) -> Mat {
    let se = SymmetricEigen::new(symmetrize(m));
    let d = Mat::from_diagonal(&se.eigenvalues.map(f));
    &se.eigenvectors * d * se.eigenvectors.transpose()
}

pub fn eigvals(m: &Mat) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(symmetrize(m)).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn min_eig(m: &Mat) -> f64 {
    eigvals(m).first().copied().unwrap_or(f64::INFINITY)
}

pub fn sym_sqrt(m: &Mat) -> Mat {
    sym_map(m, |x| x.max(0.0).sqrt())
}

pub fn sym_pow(m: &Mat, p: f64) -> Result<Mat> {
    require_pd(m, "matrix power")?;
    Ok(sym_map(m, |x| x.powf(p)))
}

pub fn require_pd(m: &Mat, what: &str) -> Result<()> {
    let e = min_eig(m);
    if e > crate::PD_TOL {
        Ok(())
    } else {
        Err(GaussError::NotPositive(format!("{what}: minimum eigenvalue {e:.3e}")))
    }
}

/// `ln det m` through a Cholesky factor; the empty matrix gives 0.
pub fn logdet(m: &Mat) -> Result<f64> {
    if m.is_empty() {
        return Ok(0.0);
    }
    let ch = symmetrize(m)
        .cholesky()
        .ok_or_else(|| GaussError::NotPositive(format!("log-determinant of a {}×{} matrix", m.nrows(), m.ncols())))?;
    Ok(2.0 * ch.l_dirty().diagonal().iter().map(|x| x.ln()).sum::<f64>())
}

pub fn inverse(m: &Mat) -> Result<Mat> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| GaussError::Singular(format!("{}×{} matrix is not invertible", m.nrows(), m.ncols())))
}

pub fn sub(m: &Mat, rows: &[usize], cols: &[usize]) -> Mat {
    m.select_rows(rows).select_columns(cols)
}

/// Schur complement `B − Xᵀ A⁻¹ X` of the `on` block, indexed by `rest`.
pub fn schur(m: &Mat, on: &[usize], rest: &[usize]) -> Result<Mat> {
    if on.is_empty() {
        return Ok(sub(m, rest, rest));
    }
    let a = sub(m, on, on);
    let x = sub(m, on, rest);
    let solved = a.lu().solve(&x).ok_or_else(|| GaussError::Singular("Schur pivot block".into()))?;
    Ok(symmetrize(&(sub(m, rest, rest) - x.transpose() * solved)))
}

/// Weighted geometric mean `A^{½}(A^{-½} B A^{-½})^t A^{½}`.
pub fn weighted_geomean(a: &Mat, b: &Mat, t: f64) -> Result<Mat> {
    require_pd(a, "geometric mean, first argument")?;
    require_pd(b, "geometric mean, second argument")?;
    let ah = sym_sqrt(a);
    let aih = sym_map(a, |x| x.powf(-0.5));
    let inner = sym_map(&(&aih * b * &aih), |x| x.max(0.0).powf(t));
    Ok(symmetrize(&(&ah * inner * &ah)))
}

pub fn geometric_mean(a: &Mat, b: &Mat) -> Result<Mat> {
    weighted_geomean(a, b, 0.5)
}

pub fn direct_sum(blocks: &[&Mat]) -> Mat {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let m: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Mat::zeros(n, m);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spd3() -> Mat {
        Mat::from_row_slice(3, 3, &[4.0, 1.0, 0.5, 1.0, 3.0, -0.2, 0.5, -0.2, 2.0])
    }

    #[test]
    fn schur_scalar_blocks() {
        let m = Mat::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        let s = schur(&m, &[0], &[1]).unwrap();
        assert!((s[(0, 0)] - (3.0 - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn schur_matches_inverse_block() {
        let m = spd3();
        let inv = inverse(&m).unwrap();
        let s = schur(&m, &[0], &[1, 2]).unwrap();
        let d = inverse(&s).unwrap() - sub(&inv, &[1, 2], &[1, 2]);
        assert!(d.amax() < 1e-12);
        let f = logdet(&m).unwrap() - logdet(&sub(&m, &[0], &[0])).unwrap() - logdet(&s).unwrap();
        assert!(f.abs() < 1e-12);
    }

    #[test]
    fn geomean_of_diagonals() {
        let a = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![4.0, 9.0]));
        let b = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 4.0]));
        let g = geometric_mean(&a, &b).unwrap();
        assert!((g[(0, 0)] - 2.0).abs() < 1e-12 && (g[(1, 1)] - 6.0).abs() < 1e-12 && g[(0, 1)].abs() < 1e-12);
        let w = weighted_geomean(&a, &b, 0.25).unwrap();
        assert!((w[(1, 1)] - 9f64.powf(0.75) * 4f64.powf(0.25)).abs() < 1e-12);
    }

    #[test]
    fn geomean_endpoints_and_determinant() {
        let a = spd3();
        let b = Mat::from_row_slice(3, 3, &[1.0, 0.3, 0.0, 0.3, 2.0, 0.4, 0.0, 0.4, 1.5]);
        assert!((weighted_geomean(&a, &b, 0.0).unwrap() - &a).amax() < 1e-12);
        assert!((weighted_geomean(&a, &b, 1.0).unwrap() - &b).amax() < 1e-12);
        assert!((geometric_mean(&a, &a).unwrap() - &a).amax() < 1e-12);
        let t = 0.3;
        let g = weighted_geomean(&a, &b, t).unwrap();
        let want = (1.0 - t) * logdet(&a).unwrap() + t * logdet(&b).unwrap();
        assert!((logdet(&g).unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn logdet_rejects_indefinite() {
        let m = Mat::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(logdet(&m).is_err());
        assert_eq!(logdet(&Mat::zeros(0, 0)).unwrap(), 0.0);
    }
}
