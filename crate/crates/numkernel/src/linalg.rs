use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::{CMat, KernelError, Result, EIG_TOL};

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Computational basis projector |i⟩⟨i| in dimension `d`.
pub fn basis_proj(d: usize, i: usize) -> CMat {
    let mut m = CMat::zeros(d, d);
    m[(i, i)] = c64(1.0, 0.0);
    m
}

/// Column vector |i⟩.
pub fn ket(d: usize, i: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(d);
    v[i] = c64(1.0, 0.0);
    v
}

/// |v⟩⟨v| for a (not necessarily normalized) vector.
pub fn outer(v: &DVector<Complex64>) -> CMat {
    v * v.adjoint()
}

pub fn diag(entries: &[f64]) -> CMat {
    let n = entries.len();
    CMat::from_fn(n, n, |i, j| if i == j { c64(entries[i], 0.0) } else { c64(0.0, 0.0) })
}

pub fn from_real(m: &DMatrix<f64>) -> CMat {
    m.map(|x| c64(x, 0.0))
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.)])
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(2, 2, &[c64(0., 0.), c64(0., -1.), c64(0., 1.), c64(0., 0.)])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[c64(1., 0.), c64(0., 0.), c64(0., 0.), c64(-1., 0.)])
}

/// ½(1 + r·σ). A unit vector gives a pure qubit state.
pub fn bloch_matrix(r: [f64; 3]) -> CMat {
    let [x, y, z] = r;
    CMat::from_row_slice(
        2,
        2,
        &[c64(0.5 * (1.0 + z), 0.0), c64(0.5 * x, -0.5 * y), c64(0.5 * x, 0.5 * y), c64(0.5 * (1.0 - z), 0.0)],
    )
}

pub fn trace(m: &CMat) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Re Tr[AB] without forming the product.
pub fn tr_prod(a: &CMat, b: &CMat) -> f64 {
    let mut s = 0.0;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            let x = a[(i, k)] * b[(k, i)];
            s += x.re;
        }
    }
    s
}

pub fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// max |m - m†| entrywise.
pub fn herm_deviation(m: &CMat) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

fn check_hermitian(h: &CMat) -> Result<()> {
    if !h.is_square() {
        return Err(KernelError::Dimension(format!("{}x{} is not square", h.nrows(), h.ncols())));
    }
    let scale = 1.0f64.max(h.camax());
    let dev = herm_deviation(h);
    if dev > 1e-9 * scale {
        return Err(KernelError::NotHermitian(dev));
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigh(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    let se = SymmetricEigen::new(hermitize(h));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let vals = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        vecs.set_column(col, &se.eigenvectors.column(k));
    }
    (vals, vecs)
}

pub fn eigvalsh(h: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(hermitize(h)).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn min_eig(h: &CMat) -> f64 {
    eigvalsh(h).first().copied().unwrap_or(0.0)
}

fn rebuild(vals: &[Complex64], u: &CMat) -> CMat {
    let n = u.nrows();
    let mut scaled = u.clone();
    for (j, &f) in vals.iter().enumerate() {
        for i in 0..n {
            scaled[(i, j)] *= f;
        }
    }
    scaled * u.adjoint()
}

/// U f(Λ) U† for Hermitian `h`.
pub fn matfun(h: &CMat, f: impl Fn(f64) -> f64) -> Result<CMat> {
    check_hermitian(h)?;
    Ok(spectral_map(h, |x| c64(f(x), 0.0)))
}

/// Unchecked spectral calculus with a complex-valued function.
/// The input is Hermitized first.
pub fn spectral_map(h: &CMat, f: impl Fn(f64) -> Complex64) -> CMat {
    let (vals, u) = eigh(h);
    let fv: Vec<Complex64> = vals.iter().map(|&x| f(x)).collect();
    rebuild(&fv, &u)
}

/// Power on the support; the kernel (eigenvalues ≤ EIG_TOL) maps to 0.
/// Negative exponents give generalized inverses.
pub fn psd_pow(h: &CMat, p: f64) -> CMat {
    spectral_map(h, |x| if x > EIG_TOL { c64(x.powf(p), 0.0) } else { c64(0.0, 0.0) })
}

/// Complex power λ^z = exp(z ln λ) on the support, 0 on the kernel.
pub fn psd_cpow(h: &CMat, z: Complex64) -> CMat {
    spectral_map(h, |x| if x > EIG_TOL { (z * x.ln()).exp() } else { c64(0.0, 0.0) })
}

pub fn sqrtm(h: &CMat) -> CMat {
    psd_pow(h, 0.5)
}

/// Matrix logarithm on the support with 0 on the kernel.
pub fn logm(h: &CMat) -> CMat {
    spectral_map(h, |x| if x > EIG_TOL { c64(x.ln(), 0.0) } else { c64(0.0, 0.0) })
}

pub fn expm_h(h: &CMat) -> CMat {
    spectral_map(h, |x| c64(x.exp(), 0.0))
}

/// Projector onto the eigenvectors with eigenvalue above EIG_TOL.
pub fn support_proj(h: &CMat) -> CMat {
    spectral_map(h, |x| if x > EIG_TOL { c64(1.0, 0.0) } else { c64(0.0, 0.0) })
}

/// Fréchet derivative of the spectral function `f` at Hermitian `h` in
/// direction `w` (Daleckii-Krein). `df` is the scalar derivative.
pub fn frechet(h: &CMat, w: &CMat, f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64) -> CMat {
    let (vals, u) = eigh(h);
    let n = vals.len();
    let mut wt = u.adjoint() * w * &u;
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (vals[i], vals[j]);
            let dd = if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                (f(a) - f(b)) / (a - b)
            } else {
                df(0.5 * (a + b))
            };
            wt[(i, j)] *= dd;
        }
    }
    &u * wt * u.adjoint()
}

pub fn tensor(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn tensor_all(factors: &[&CMat]) -> CMat {
    let mut out = CMat::identity(1, 1);
    for f in factors {
        out = out.kronecker(*f);
    }
    out
}

/// n-fold tensor power.
pub fn tensor_pow(a: &CMat, n: usize) -> CMat {
    let mut out = CMat::identity(1, 1);
    for _ in 0..n {
        out = out.kronecker(a);
    }
    out
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Partial trace keeping the (0-based) subsystems in `keep`, in their
/// original order.
pub fn ptrace(m: &CMat, dims: &[usize], keep: &[usize]) -> Result<CMat> {
    let total: usize = dims.iter().product();
    if m.nrows() != total || m.ncols() != total {
        return Err(KernelError::Dimension(format!("matrix {}x{} vs dims {:?}", m.nrows(), m.ncols(), dims)));
    }
    let mut keep_sorted: Vec<usize> = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if let Some(&bad) = keep_sorted.iter().find(|&&k| k >= dims.len()) {
        return Err(KernelError::Subsystem(bad));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep_sorted.contains(k)).collect();
    let st = strides(dims);
    let kdims: Vec<usize> = keep_sorted.iter().map(|&k| dims[k]).collect();
    let tdims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let kn: usize = kdims.iter().product();
    let offsets = |sub: &[usize], sd: &[usize]| -> Vec<usize> {
        let n: usize = sd.iter().product();
        let ls = strides(sd);
        (0..n)
            .map(|idx| sub.iter().enumerate().map(|(p, &k)| ((idx / ls[p]) % sd[p]) * st[k]).sum())
            .collect()
    };
    let koff = offsets(&keep_sorted, &kdims);
    let toff = offsets(&traced, &tdims);
    let mut out = CMat::zeros(kn, kn);
    for &t in &toff {
        for (r, &kr) in koff.iter().enumerate() {
            for (c, &kc) in koff.iter().enumerate() {
                out[(r, c)] += m[(kr + t, kc + t)];
            }
        }
    }
    Ok(out)
}

/// Reorder subsystems: position `i` of the result holds old subsystem
/// `perm[i]`.
pub fn permute_subsystems(m: &CMat, dims: &[usize], perm: &[usize]) -> Result<CMat> {
    let total: usize = dims.iter().product();
    let mut seen = perm.to_vec();
    seen.sort_unstable();
    if perm.len() != dims.len() || seen.iter().enumerate().any(|(i, &p)| i != p) {
        return Err(KernelError::Dimension(format!("{perm:?} is not a permutation of {} subsystems", dims.len())));
    }
    if m.nrows() != total || m.ncols() != total {
        return Err(KernelError::Dimension(format!("matrix {}x{} vs dims {:?}", m.nrows(), m.ncols(), dims)));
    }
    let old_st = strides(dims);
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let new_st = strides(&new_dims);
    let map: Vec<usize> = (0..total)
        .map(|idx| perm.iter().enumerate().map(|(i, &p)| ((idx / new_st[i]) % new_dims[i]) * old_st[p]).sum())
        .collect();
    Ok(CMat::from_fn(total, total, |r, c| m[(map[r], map[c])]))
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

pub fn trace_norm(m: &CMat) -> f64 {
    singular_values(m).iter().sum()
}

/// Spectral projector onto the strictly positive eigenspace of `h` and the
/// positive part h₊ = P h P.
pub fn positive_part(h: &CMat) -> (CMat, CMat) {
    let (vals, u) = eigh(h);
    let proj: Vec<Complex64> = vals.iter().map(|&x| c64(if x > EIG_TOL { 1.0 } else { 0.0 }, 0.0)).collect();
    let part: Vec<Complex64> = vals.iter().map(|&x| c64(if x > EIG_TOL { x } else { 0.0 }, 0.0)).collect();
    (rebuild(&proj, &u), rebuild(&part, &u))
}

/// Uhlmann fidelity ‖√ρ√σ‖₁ of two PSD matrices.
pub fn fidelity_mat(rho: &CMat, sigma: &CMat) -> f64 {
    trace_norm(&(sqrtm(rho) * sqrtm(sigma)))
}

/// Direct sum of square blocks.
pub fn direct_sum(blocks: &[&CMat]) -> CMat {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMat::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        out.view_mut((off, off), (b.nrows(), b.ncols())).copy_from(*b);
        off += b.nrows();
    }
    out
}
