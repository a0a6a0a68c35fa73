use entropy::relative_entropy;
use numkernel::{tensor_pow, CMat, DensityMatrix};

use crate::petz::RotatedPetzFamily;
use crate::{Frame, RecoveryError, Result, Side};

/// Largest total dimension of ρ^{⊗n} accepted.
pub const REGULARIZED_DIM_CAP: usize = 1024;

#[derive(Clone, Debug)]
pub struct RegularizedReport {
    pub n: usize,
    /// (1/n) D(ρ^{⊗n} ‖ Σₖ wₖ (R^{[tₖ]}(ρ_YC))^{⊗n}).
    pub value: f64,
    pub cqmi: f64,
    /// value ≤ cqmi + 1e-6. Not guaranteed for finite n.
    pub holds: bool,
    pub tail_mass: f64,
}

/// Finite-n term of the regularized lower bound on I(A:B|C) by the
/// β₀-mixture of i.i.d. rotated Petz recoveries.
pub fn cqmi_regularized_bound_check(rho: &DensityMatrix, side: Side, n: usize) -> Result<RegularizedReport> {
    if n == 0 {
        return Err(RecoveryError::Argument("n must be positive".into()));
    }
    let total = rho.dim().checked_pow(n as u32).unwrap_or(usize::MAX);
    if total > REGULARIZED_DIM_CAP {
        return Err(RecoveryError::CapExceeded(total, REGULARIZED_DIM_CAP));
    }
    let cqmi = entropy::cqmi(rho, &[0], &[1], &[2])?;
    let f = Frame::new(rho, side)?;
    let fam = RotatedPetzFamily::standard(f.xc.clone())?;
    let mut mix = CMat::zeros(total, total);
    for (&t, &w) in fam.nodes().iter().zip(fam.weights()) {
        let out = f.to_abc(fam.choi(t)?.apply(&f.input, f.dy)?, side)?;
        mix += tensor_pow(out.mat(), n).scale(w);
    }
    let dims: Vec<usize> = rho.dims().iter().copied().cycle().take(3 * n).collect();
    let sigma = DensityMatrix::from_matrix_unchecked(numkernel::hermitize(&mix), dims.clone());
    let rho_n = DensityMatrix::from_matrix_unchecked(tensor_pow(rho.mat(), n), dims);
    let d = relative_entropy(&rho_n, &sigma);
    let value = if d.is_finite() { d.value / n as f64 } else { f64::INFINITY };
    Ok(RegularizedReport { n, value, cqmi, holds: value <= cqmi + 1e-6, tail_mass: fam.tail_mass() })
}
