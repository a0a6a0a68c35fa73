//! Recoverability of tripartite states.
//!
//! A state ρ_ABC is always conditioned on its last system C. The recovery
//! channel maps C to XC, where X is the system being regenerated
//! ([`Side::A`] recovers A from ρ_BC, [`Side::B`] recovers B from ρ_AC).

mod choi;
mod families;
mod petz;
mod regularized;
mod solver;

pub use choi::ChoiMatrix;
pub use families::{
    ccq_blocks, ccq_recovery, ccq_state, counterexample_scan, fawzi_fawzi_state, violation_family, ScanOptions, ScanRow,
};
pub use petz::{
    beta0, beta0_averaged_state, beta0_tail_mass, petz_map_apply, petz_recovered, rotated_petz_apply, Beta0State,
    RotatedPetzFamily,
};
pub use regularized::{cqmi_regularized_bound_check, RegularizedReport};
pub use solver::{
    fidelity_of_recovery, measured_recovery_estimate, recovery_chain, relative_entropy_of_recovery, ChainReport,
    FidelityResult, RecoveryResult, SolverOptions,
};

use numkernel::{CMat, DensityMatrix, KernelError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RecoveryError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Entropy(#[from] entropy::EntropyError),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("{0} exceeds the configured cap {1}")]
    CapExceeded(usize, usize),
    #[error("invalid Choi matrix: {0}")]
    InvalidChoi(String),
}

pub type Result<T> = std::result::Result<T, RecoveryError>;

/// Which system the recovery channel regenerates from C.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// A tripartite state rearranged as (Y, X, C): Y is kept, X is recovered.
#[derive(Clone, Debug)]
pub(crate) struct Frame {
    pub dy: usize,
    pub dx: usize,
    pub dc: usize,
    /// ρ on Y X C.
    pub target: DensityMatrix,
    /// ρ_YC, the channel input.
    pub input: CMat,
    /// ρ_XC, which defines the Petz maps.
    pub xc: DensityMatrix,
}

pub(crate) fn three_dims(rho: &DensityMatrix) -> Result<[usize; 3]> {
    match rho.dims() {
        &[a, b, c] => Ok([a, b, c]),
        d => Err(RecoveryError::Argument(format!("expected three subsystems, got dims {d:?}"))),
    }
}

impl Frame {
    pub fn new(rho: &DensityMatrix, side: Side) -> Result<Self> {
        let [da, db, dc] = three_dims(rho)?;
        let (perm, dy, dx) = match side {
            Side::A => ([1, 0, 2], db, da),
            Side::B => ([0, 1, 2], da, db),
        };
        let m = numkernel::permute_subsystems(rho.mat(), &[da, db, dc], &perm)?;
        let target = DensityMatrix::from_matrix_unchecked(m, vec![dy, dx, dc]);
        let input = numkernel::ptrace(target.mat(), &[dy, dx, dc], &[0, 2])?;
        let xc = target.partial_trace(&[1, 2])?;
        Ok(Self { dy, dx, dc, target, input, xc })
    }

    /// Puts a state on Y X C back into A B C order.
    pub fn to_abc(&self, m: CMat, side: Side) -> Result<DensityMatrix> {
        let dims = [self.dy, self.dx, self.dc];
        let m = match side {
            Side::A => numkernel::permute_subsystems(&m, &dims, &[1, 0, 2])?,
            Side::B => m,
        };
        let abc = match side {
            Side::A => vec![self.dx, self.dy, self.dc],
            Side::B => vec![self.dy, self.dx, self.dc],
        };
        Ok(DensityMatrix::from_matrix_unchecked(numkernel::hermitize(&m), abc))
    }
}
