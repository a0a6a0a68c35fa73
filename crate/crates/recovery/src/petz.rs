use std::f64::consts::PI;

use numkernel::{c64, identity, permute_subsystems, psd_cpow, ptrace, tensor, CMat, DensityMatrix};

use crate::choi::ChoiMatrix;
use crate::{Frame, RecoveryError, Result, Side};

/// β₀(t) = (π/2) (cosh(πt) + 1)⁻¹.
pub fn beta0(t: f64) -> f64 {
    0.5 * PI / ((PI * t).cosh() + 1.0)
}

/// β₀ mass outside [−T, T]; the CDF is (1 + tanh(πt/2)) / 2.
pub fn beta0_tail_mass(t_max: f64) -> f64 {
    1.0 - (0.5 * PI * t_max).tanh()
}

fn xc_dims(rho_xc: &DensityMatrix) -> Result<(usize, usize)> {
    match rho_xc.dims() {
        &[x, c] => Ok((x, c)),
        d => Err(RecoveryError::Argument(format!("reference state must be bipartite, got dims {d:?}"))),
    }
}

/// L = ρ_XC^{(1+it)/2} (1_X ⊗ ρ_C^{(−1−it)/2}), so that R^{[t]}(Z) = L (1_X ⊗ Z) L†.
fn petz_operator(rho_xc: &DensityMatrix, t: f64) -> Result<CMat> {
    let (dx, dc) = xc_dims(rho_xc)?;
    let rc = ptrace(rho_xc.mat(), &[dx, dc], &[1])?;
    let left = psd_cpow(rho_xc.mat(), c64(0.5, 0.5 * t));
    let right = tensor(&identity(dx), &psd_cpow(&rc, c64(-0.5, -0.5 * t)));
    Ok(left * right)
}

/// (1_Y ⊗ R)(W) for W on Y ⊗ C, returned on Y ⊗ X ⊗ C.
fn apply_operator(l: &CMat, dx: usize, dc: usize, w: &CMat) -> Result<CMat> {
    if w.nrows() % dc != 0 {
        return Err(numkernel::KernelError::Dimension(format!("input size {} is not a multiple of {dc}", w.nrows())).into());
    }
    let dy = w.nrows() / dc;
    let embedded = permute_subsystems(&tensor(w, &identity(dx)), &[dy, dc, dx], &[0, 2, 1])?;
    let big = tensor(&identity(dy), l);
    Ok(numkernel::hermitize(&(&big * embedded * big.adjoint())))
}

fn output_dims(input: &DensityMatrix, dx: usize, dc: usize) -> Result<Vec<usize>> {
    let dims = input.dims();
    match dims.last() {
        Some(&last) if last == dc => {
            let mut out = dims[..dims.len() - 1].to_vec();
            out.extend([dx, dc]);
            Ok(out)
        }
        _ => Err(numkernel::KernelError::Dimension(format!("input dims {dims:?} must end with C of size {dc}")).into()),
    }
}

/// Rotated Petz map ρ_XC^{(1+it)/2} ρ_C^{(−1−it)/2} (·) ρ_C^{(−1+it)/2} ρ_XC^{(1−it)/2}
/// applied to the last subsystem of `input`. Inverses are taken on the
/// support of ρ_C and the output is never renormalized.
pub fn rotated_petz_apply(rho_xc: &DensityMatrix, t: f64, input: &DensityMatrix) -> Result<DensityMatrix> {
    let (dx, dc) = xc_dims(rho_xc)?;
    let dims = output_dims(input, dx, dc)?;
    let l = petz_operator(rho_xc, t)?;
    Ok(DensityMatrix::from_matrix_unchecked(apply_operator(&l, dx, dc, input.mat())?, dims))
}

/// Petz recovery map ρ_XC^{1/2} ρ_C^{−1/2} (·) ρ_C^{−1/2} ρ_XC^{1/2}.
pub fn petz_map_apply(rho_xc: &DensityMatrix, input: &DensityMatrix) -> Result<DensityMatrix> {
    rotated_petz_apply(rho_xc, 0.0, input)
}

/// (1 ⊗ R^{[t]})(ρ_YC) for a tripartite ρ, in A B C order.
pub fn petz_recovered(rho: &DensityMatrix, side: Side, t: f64) -> Result<DensityMatrix> {
    let f = Frame::new(rho, side)?;
    let l = petz_operator(&f.xc, t)?;
    f.to_abc(apply_operator(&l, f.dx, f.dc, &f.input)?, side)
}

fn choi_of_operator(l: &CMat, dx: usize, dc: usize) -> ChoiMatrix {
    let dout = dx * dc;
    let mut j = CMat::zeros(dc * dout, dc * dout);
    for i in 0..dc {
        for k in 0..dc {
            let mut e = CMat::zeros(dc, dc);
            e[(i, k)] = c64(1.0, 0.0);
            let out = l * tensor(&identity(dx), &e) * l.adjoint();
            j.view_mut((i * dout, k * dout), (dout, dout)).copy_from(&out);
        }
    }
    ChoiMatrix::unchecked(j, dc, dout).expect("consistent dims")
}

/// Rotated Petz maps of a reference state ρ_XC on a truncated β₀ grid.
#[derive(Clone, Debug)]
pub struct RotatedPetzFamily {
    rho_xc: DensityMatrix,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    tail_mass: f64,
}

impl RotatedPetzFamily {
    /// Trapezoid rule on [−t_max, t_max] with `n` nodes, weights
    /// renormalized to sum to one.
    pub fn new(rho_xc: DensityMatrix, t_max: f64, n: usize) -> Result<Self> {
        xc_dims(&rho_xc)?;
        if n < 3 || !(t_max > 0.0) {
            return Err(RecoveryError::Argument("need t_max > 0 and at least 3 nodes".into()));
        }
        let h = 2.0 * t_max / (n - 1) as f64;
        let nodes: Vec<f64> = (0..n).map(|k| -t_max + h * k as f64).collect();
        let mut weights: Vec<f64> = nodes
            .iter()
            .enumerate()
            .map(|(k, &t)| if k == 0 || k == n - 1 { 0.5 * beta0(t) } else { beta0(t) })
            .collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        Ok(Self { rho_xc, nodes, weights, tail_mass: beta0_tail_mass(t_max) })
    }

    /// The default grid |t| ≤ 8 with 129 nodes.
    pub fn standard(rho_xc: DensityMatrix) -> Result<Self> {
        Self::new(rho_xc, 8.0, 129)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn apply(&self, t: f64, input: &DensityMatrix) -> Result<DensityMatrix> {
        rotated_petz_apply(&self.rho_xc, t, input)
    }

    /// Σₖ wₖ R^{[tₖ]}(input).
    pub fn averaged(&self, input: &DensityMatrix) -> Result<DensityMatrix> {
        let (dx, dc) = xc_dims(&self.rho_xc)?;
        let dims = output_dims(input, dx, dc)?;
        let mut acc = CMat::zeros(input.dim() * dx, input.dim() * dx);
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            let l = petz_operator(&self.rho_xc, t)?;
            acc += apply_operator(&l, dx, dc, input.mat())?.scale(w);
        }
        Ok(DensityMatrix::from_matrix_unchecked(numkernel::hermitize(&acc), dims))
    }

    pub fn choi(&self, t: f64) -> Result<ChoiMatrix> {
        let (dx, dc) = xc_dims(&self.rho_xc)?;
        Ok(choi_of_operator(&petz_operator(&self.rho_xc, t)?, dx, dc))
    }

    pub fn averaged_choi(&self) -> Result<ChoiMatrix> {
        let (dx, dc) = xc_dims(&self.rho_xc)?;
        let n = dc * dx * dc;
        let mut j = CMat::zeros(n, n);
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            j += choi_of_operator(&petz_operator(&self.rho_xc, t)?, dx, dc).mat().scale(w);
        }
        ChoiMatrix::unchecked(j, dc, dx * dc)
    }
}

/// β₀-averaged recovered state, with the β₀ mass lost to truncation.
#[derive(Clone, Debug)]
pub struct Beta0State {
    pub state: DensityMatrix,
    pub tail_mass: f64,
    /// Set when the truncated mass exceeds 1e-4.
    pub tail_warning: bool,
}

/// Σₖ wₖ (1 ⊗ R^{[tₖ]})(ρ_YC) in A B C order.
pub fn beta0_averaged_state(rho: &DensityMatrix, side: Side, t_max: f64, nodes: usize) -> Result<Beta0State> {
    let f = Frame::new(rho, side)?;
    let fam = RotatedPetzFamily::new(f.xc.clone(), t_max, nodes)?;
    let input = DensityMatrix::from_matrix_unchecked(f.input.clone(), vec![f.dy, f.dc]);
    let out = fam.averaged(&input)?.into_mat();
    let tail = fam.tail_mass();
    Ok(Beta0State { state: f.to_abc(out, side)?, tail_mass: tail, tail_warning: tail > 1e-4 })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use numkernel::random::{haar_unitary, random_state};
    use numkernel::{psd_pow, sqrtm, trace};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// ρ_AC ⊗ ρ_B-like Markov chain: A ↔ C ↔ B with C = C₁C₂ split.
    pub(crate) fn markov_state(rng: &mut ChaCha8Rng) -> DensityMatrix {
        // ρ_{A C1} ⊗ ρ_{C2 B} rearranged to A B (C1 C2)
        let ac1 = random_state(rng, 4);
        let c2b = random_state(rng, 4);
        let m = tensor(ac1.mat(), c2b.mat()); // A C1 C2 B
        let m = permute_subsystems(&m, &[2, 2, 2, 2], &[0, 3, 1, 2]).unwrap();
        DensityMatrix::new(m, vec![2, 2, 4]).unwrap()
    }

    #[test]
    fn beta0_is_a_density() {
        let fam = RotatedPetzFamily::standard(DensityMatrix::maximally_mixed(4).with_dims(vec![2, 2]).unwrap()).unwrap();
        assert!((fam.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(fam.weights().iter().all(|&w| w >= 0.0));
        assert!(fam.tail_mass() < 1e-10);
        // raw trapezoid mass is already close to one
        let h = 16.0 / 128.0;
        let raw: f64 = fam.nodes().iter().map(|&t| beta0(t) * h).sum();
        assert!((raw - 1.0).abs() < 1e-6);
    }

    #[test]
    fn markov_state_is_recovered_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = markov_state(&mut rng);
        assert!(entropy::cqmi(&rho, &[0], &[1], &[2]).unwrap().abs() < 1e-9);
        let rec = petz_recovered(&rho, Side::A, 0.0).unwrap();
        assert!(rho.fidelity(&rec).unwrap() > 1.0 - 1e-9);
        let avg = beta0_averaged_state(&rho, Side::A, 8.0, 129).unwrap();
        assert!((avg.state.mat() - rho.mat()).camax() < 1e-6);
        assert!(!avg.tail_warning);
    }

    #[test]
    fn product_input_is_mapped_to_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ra = random_state(&mut rng, 2);
        let rc = random_state(&mut rng, 3);
        let rac = ra.tensor(&rc);
        let out = petz_map_apply(&rac, &rc).unwrap();
        assert!((out.mat() - rac.mat()).camax() < 1e-10);
        assert_eq!(out.dims(), &[2, 3]);
    }

    #[test]
    fn petz_matches_direct_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random_state(&mut rng, 8).with_dims(vec![2, 2, 2]).unwrap();
        let rac = rho.partial_trace(&[0, 2]).unwrap();
        let rbc = rho.partial_trace(&[1, 2]).unwrap();
        let rc = rho.partial_trace(&[2]).unwrap();
        let out = petz_map_apply(&rac, &rbc).unwrap(); // B A C
        let half = tensor(&identity(2), &sqrtm(rac.mat()));
        let inv = tensor(&identity(4), &psd_pow(rc.mat(), -0.5));
        let emb = permute_subsystems(&tensor(rbc.mat(), &identity(2)), &[2, 2, 2], &[0, 2, 1]).unwrap();
        let direct = &half * &inv * emb * &inv * &half;
        assert!((out.mat() - direct).camax() < 1e-10);
        assert!((trace(out.mat()).re - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rotated_map_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rxc = random_state(&mut rng, 4).with_dims(vec![2, 2]).unwrap();
        let input = random_state(&mut rng, 6).with_dims(vec![3, 2]).unwrap();
        let t0 = rotated_petz_apply(&rxc, 0.0, &input).unwrap();
        assert!((t0.mat() - petz_map_apply(&rxc, &input).unwrap().mat()).camax() < 1e-10);
        for t in [-2.5, 0.7, 4.0] {
            let out = rotated_petz_apply(&rxc, t, &input).unwrap();
            assert!((trace(out.mat()).re - 1.0).abs() < 1e-8);
            let fam = RotatedPetzFamily::standard(rxc.clone()).unwrap();
            let j = fam.choi(t).unwrap();
            assert!(j.is_cp() && j.tp_deviation() < 1e-8);
        }
        // covariance: conjugating C in both the reference and the input
        let u = haar_unitary(&mut rng, 2);
        let ux = tensor(&identity(2), &u);
        let rxc_u = DensityMatrix::from_matrix_unchecked(&ux * rxc.mat() * ux.adjoint(), vec![2, 2]);
        let uy = tensor(&identity(3), &u);
        let in_u = DensityMatrix::from_matrix_unchecked(&uy * input.mat() * uy.adjoint(), vec![3, 2]);
        let lhs = rotated_petz_apply(&rxc_u, 1.3, &in_u).unwrap();
        let big = tensor(&identity(6), &u);
        let rhs = &big * rotated_petz_apply(&rxc, 1.3, &input).unwrap().mat() * big.adjoint();
        assert!((lhs.mat() - rhs).camax() < 1e-10);
    }

    #[test]
    fn quadrature_refinement() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random_state(&mut rng, 8).with_dims(vec![2, 2, 2]).unwrap();
        let a = beta0_averaged_state(&rho, Side::A, 8.0, 129).unwrap();
        let b = beta0_averaged_state(&rho, Side::A, 8.0, 257).unwrap();
        assert!((a.state.mat() - b.state.mat()).camax() < 1e-6);
        assert!(numkernel::min_eig(a.state.mat()) > -1e-10);
        assert!((trace(a.state.mat()).re - 1.0).abs() < 1e-8);
        let short = beta0_averaged_state(&rho, Side::A, 2.0, 33).unwrap();
        assert!(short.tail_warning);
    }
}
