use crate::linalg::{eigvalsh, fidelity_mat, herm_deviation, hermitize, identity, psd_pow, ptrace, tr_prod, trace};
use crate::{CMat, KernelError, Result, EIG_TOL, VALID_TOL};

/// Hermitian, positive semidefinite, unit-trace matrix together with its
/// subsystem dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: CMat,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(mat: CMat, dims: Vec<usize>) -> Result<Self> {
        let n: usize = dims.iter().product();
        if !mat.is_square() || mat.nrows() != n || dims.iter().any(|&d| d == 0) {
            return Err(KernelError::Dimension(format!(
                "{}x{} matrix with subsystem dims {:?}",
                mat.nrows(),
                mat.ncols(),
                dims
            )));
        }
        let dev = herm_deviation(&mat);
        if dev > VALID_TOL {
            return Err(KernelError::NotHermitian(dev));
        }
        let tr = trace(&mat).re;
        if (tr - 1.0).abs() > VALID_TOL {
            return Err(KernelError::Trace(tr));
        }
        let mat = hermitize(&mat);
        let lo = eigvalsh(&mat)[0];
        if lo < -EIG_TOL {
            return Err(KernelError::NotPsd(lo));
        }
        Ok(Self { mat, dims })
    }

    /// Wraps a matrix that is a state by construction; only Hermitizes.
    pub fn from_matrix_unchecked(mat: CMat, dims: Vec<usize>) -> Self {
        debug_assert_eq!(mat.nrows(), dims.iter().product::<usize>());
        Self { mat: hermitize(&mat), dims }
    }

    /// Single-system state.
    pub fn from_matrix(mat: CMat) -> Result<Self> {
        let d = mat.nrows();
        Self::new(mat, vec![d])
    }

    pub fn pure(psi: &nalgebra::DVector<crate::Complex64>, dims: Vec<usize>) -> Result<Self> {
        let n = psi.norm();
        Self::new(crate::outer(&psi.unscale(n)), dims)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self { mat: identity(d).unscale(d as f64), dims: vec![d] }
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn into_mat(self) -> CMat {
        self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn with_dims(mut self, dims: Vec<usize>) -> Result<Self> {
        if dims.iter().product::<usize>() != self.dim() {
            return Err(KernelError::Dimension(format!("dims {:?} for size {}", dims, self.dim())));
        }
        self.dims = dims;
        Ok(self)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigvalsh(&self.mat)
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues().iter().filter(|&&x| x > EIG_TOL).count()
    }

    /// Reduced state on the (0-based) subsystems in `keep`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let m = ptrace(&self.mat, &self.dims, keep)?;
        let mut k = keep.to_vec();
        k.sort_unstable();
        k.dedup();
        let dims = k.iter().map(|&i| self.dims[i]).collect();
        Ok(Self::from_matrix_unchecked(m, dims))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { mat: self.mat.kronecker(&other.mat), dims }
    }

    pub fn tensor_pow(&self, n: usize) -> Self {
        let mut out = Self { mat: identity(1), dims: vec![] };
        for _ in 0..n {
            out = out.tensor(self);
        }
        out
    }

    /// Tr[E ρ] for an observable or effect.
    pub fn expect(&self, op: &CMat) -> f64 {
        tr_prod(op, &self.mat)
    }

    pub fn conjugate(&self, u: &CMat) -> Self {
        Self { mat: hermitize(&(u * &self.mat * u.adjoint())), dims: self.dims.clone() }
    }

    /// Convex combination Σ wᵢ ρᵢ; dims are taken from the first state.
    pub fn mixture(states: &[&Self], weights: &[f64]) -> Result<Self> {
        let first = states.first().ok_or_else(|| KernelError::Dimension("empty mixture".into()))?;
        let mut m = CMat::zeros(first.dim(), first.dim());
        for (s, &w) in states.iter().zip(weights) {
            if s.dim() != first.dim() {
                return Err(KernelError::Dimension("mixture of states of different size".into()));
            }
            m += s.mat.scale(w);
        }
        Ok(Self::from_matrix_unchecked(m, first.dims.clone()))
    }

    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(KernelError::Dimension(format!("{} vs {}", self.dim(), other.dim())));
        }
        Ok(fidelity_mat(&self.mat, &other.mat).min(1.0))
    }
}

/// Finite POVM: PSD effects summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    effects: Vec<CMat>,
}

impl Povm {
    pub fn new(effects: Vec<CMat>) -> Result<Self> {
        let d = effects.first().map(|e| e.nrows()).ok_or_else(|| KernelError::Dimension("no effects".into()))?;
        let mut sum = CMat::zeros(d, d);
        for e in &effects {
            if e.nrows() != d || e.ncols() != d {
                return Err(KernelError::Dimension("effects of different size".into()));
            }
            let dev = herm_deviation(e);
            if dev > VALID_TOL {
                return Err(KernelError::NotHermitian(dev));
            }
            let lo = eigvalsh(e)[0];
            if lo < -EIG_TOL {
                return Err(KernelError::NotPsd(lo));
            }
            sum += e;
        }
        let dev = (sum - identity(d)).camax();
        if dev > VALID_TOL {
            return Err(KernelError::NotComplete(dev));
        }
        Ok(Self { effects: effects.iter().map(hermitize).collect() })
    }

    /// Normalizes arbitrary PSD operators Fₖ with full-rank sum S into the
    /// POVM S^{-1/2} Fₖ S^{-1/2}.
    pub fn from_unnormalized(ops: Vec<CMat>) -> Result<Self> {
        let d = ops.first().map(|e| e.nrows()).ok_or_else(|| KernelError::Dimension("no effects".into()))?;
        let mut sum = CMat::zeros(d, d);
        for o in &ops {
            sum += o;
        }
        if eigvalsh(&sum)[0] <= EIG_TOL {
            return Err(KernelError::NotComplete(eigvalsh(&sum)[0]));
        }
        let s = psd_pow(&sum, -0.5);
        Self::new(ops.iter().map(|o| hermitize(&(&s * o * &s))).collect())
    }

    pub fn effects(&self) -> &[CMat] {
        &self.effects
    }

    pub fn dim(&self) -> usize {
        self.effects[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    /// Outcome distribution Tr[Eₖ ρ], clipped at 0.
    pub fn probabilities(&self, rho: &CMat) -> Vec<f64> {
        self.effects.iter().map(|e| tr_prod(e, rho).max(0.0)).collect()
    }

    pub fn conjugate(&self, u: &CMat) -> Self {
        Self { effects: self.effects.iter().map(|e| hermitize(&(u * e * u.adjoint()))).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{basis_proj, c64, diag};
    use crate::random::{haar_unitary, random_ket, random_state};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validation_rejects_bad_input() {
        assert!(matches!(DensityMatrix::from_matrix(diag(&[0.5, 0.6])), Err(KernelError::Trace(_))));
        assert!(matches!(DensityMatrix::from_matrix(diag(&[1.5, -0.5])), Err(KernelError::NotPsd(_))));
        let mut m = diag(&[0.5, 0.5]);
        m[(0, 1)] = c64(0.1, 0.0);
        assert!(matches!(DensityMatrix::from_matrix(m), Err(KernelError::NotHermitian(_))));
        assert!(DensityMatrix::new(diag(&[0.5, 0.5]), vec![3]).is_err());
    }

    #[test]
    fn fidelity_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rho = random_state(&mut rng, 3);
        assert!((rho.fidelity(&rho).unwrap() - 1.0).abs() < 1e-9);
        let z0 = DensityMatrix::from_matrix(basis_proj(2, 0)).unwrap();
        let z1 = DensityMatrix::from_matrix(basis_proj(2, 1)).unwrap();
        assert!(z0.fidelity(&z1).unwrap() < 1e-9);
        let (a, b) = (random_ket(&mut rng, 3), random_ket(&mut rng, 3));
        let want = a.dotc(&b).norm();
        let fa = DensityMatrix::pure(&a, vec![3]).unwrap();
        let fb = DensityMatrix::pure(&b, vec![3]).unwrap();
        assert!((fa.fidelity(&fb).unwrap() - want).abs() < 1e-10);
        let sigma = random_state(&mut rng, 3);
        let u = haar_unitary(&mut rng, 3);
        let f1 = rho.fidelity(&sigma).unwrap();
        let f2 = rho.conjugate(&u).fidelity(&sigma.conjugate(&u)).unwrap();
        assert!((f1 - f2).abs() < 1e-10);
        assert!((f1 - sigma.fidelity(&rho).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn povm_normalization() {
        let p = Povm::new(vec![diag(&[0.4, 0.2]), diag(&[0.6, 0.8])]).unwrap();
        assert_eq!(p.len(), 2);
        assert!(Povm::new(vec![diag(&[0.4, 0.2]), diag(&[0.6, 0.7])]).is_err());
        let q = Povm::from_unnormalized(vec![diag(&[1.0, 2.0]), diag(&[3.0, 2.0])]).unwrap();
        assert!((q.effects()[0][(0, 0)].re - 0.25).abs() < 1e-12);
    }
}
