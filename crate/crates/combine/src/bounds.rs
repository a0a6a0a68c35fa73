use entropy::{binary_entropy, binary_entropy_inv};
use numkernel::LN2;

use crate::{CombineError, Result};

fn check_entropy(h: f64) -> Result<f64> {
    if !(-1e-12..=LN2 + 1e-12).contains(&h) {
        return Err(CombineError::Argument(format!("entropy {h} outside [0, ln 2]")));
    }
    Ok(h.clamp(0.0, LN2))
}

fn h2(p: f64) -> f64 {
    binary_entropy(p.clamp(0.0, 1.0)).expect("clamped")
}

fn h2_inv(h: f64) -> f64 {
    binary_entropy_inv(h.clamp(0.0, LN2)).expect("clamped")
}

/// a ∗ b = a(1 − b) + (1 − a)b.
pub fn convolve(a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
        return Err(CombineError::Argument(format!("({a}, {b}) not probabilities")));
    }
    Ok(a * (1.0 - b) + (1.0 - a) * b)
}

/// Mrs. Gerber's lemma h₂(h₂⁻¹(H₁) ∗ h₂⁻¹(H₂)).
pub fn classical_mgl(h1: f64, h2_: f64) -> Result<f64> {
    let (h1, h2_) = (check_entropy(h1)?, check_entropy(h2_)?);
    Ok(h2(convolve(h2_inv(h1), h2_inv(h2_))?))
}

/// ln 2 − (ln 2 − H₁)(ln 2 − H₂)/ln 2, attained by erasure channels.
pub fn classical_upper(h1: f64, h2_: f64) -> Result<f64> {
    let (h1, h2_) = (check_entropy(h1)?, check_entropy(h2_)?);
    Ok(LN2 - (LN2 - h1) * (LN2 - h2_) / LN2)
}

/// 0.799 H (ln 2 − H)/ln 2 + H.
pub fn gx_lower(h: f64) -> Result<f64> {
    let h = check_entropy(h)?;
    Ok(0.799 * h * (LN2 - h) / LN2 + h)
}

/// −2 ln cos[½ arccos(f g) − ½ arccos g].
fn fg_gain(f: f64, g: f64) -> f64 {
    let f = f.clamp(0.0, 1.0);
    let g = g.clamp(0.0, 1.0);
    let angle = 0.5 * (f * g).acos() - 0.5 * g.acos();
    -2.0 * angle.cos().ln()
}

/// The four lower bounds on H(X₁+X₂|B₁B₂) for uniform priors, in the order
/// (fidelity bound on W₁, same on W₂, dual versions of both).
pub fn qmgl_two_terms(h1: f64, h2_: f64) -> Result<[f64; 4]> {
    let (h1, h2_) = (check_entropy(h1)?, check_entropy(h2_)?);
    let f_up = |h: f64| 1.0 - 2.0 * h2_inv(LN2 - h);
    let g_lo = |h: f64| h.exp() - 1.0;
    let f_up_dual = |h: f64| 1.0 - 2.0 * h2_inv(h);
    let g_lo_dual = |h: f64| 2.0 * (-h).exp() - 1.0;
    Ok([
        h1 + fg_gain(f_up(h1), g_lo(h2_)),
        h2_ + fg_gain(f_up(h2_), g_lo(h1)),
        h2_ + fg_gain(f_up_dual(h1), g_lo_dual(h2_)),
        h1 + fg_gain(f_up_dual(h2_), g_lo_dual(h1)),
    ])
}

/// Lower bound on H(X₁+X₂|B₁B₂) for independent uniform cq states.
pub fn qmgl_two(h1: f64, h2_: f64) -> Result<f64> {
    Ok(qmgl_two_terms(h1, h2_)?.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

fn iid_low(h: f64) -> f64 {
    let x = 1.0 - 2.0 * h2_inv(h);
    h + fg_gain(x, x)
}

fn iid_high(h: f64) -> f64 {
    let x = 1.0 - 2.0 * h2_inv(LN2 - h);
    h + fg_gain(x, x)
}

const SWITCH_BAND: f64 = 1e-12;

/// Lower bound on H(X₁+X₂|B₁B₂) for two copies of the same uniform cq state.
pub fn qmgl_iid(h: f64) -> Result<f64> {
    let h = check_entropy(h)?;
    let mid = 0.5 * LN2;
    Ok(if (h - mid).abs() <= SWITCH_BAND {
        iid_low(h).max(iid_high(h))
    } else if h < mid {
        iid_low(h)
    } else {
        iid_high(h)
    })
}

/// H + 0.083 H/(1 − ln H) below ½ ln 2, mirrored above.
pub fn qmgl_iid_convenient(h: f64) -> Result<f64> {
    let h = check_entropy(h)?;
    let gain = |x: f64| if x <= 0.0 { 0.0 } else { 0.083 * x / (1.0 - x.ln()) };
    Ok(if h <= 0.5 * LN2 { h + gain(h) } else { h + gain(LN2 - h) })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConjectureBounds {
    pub lower: f64,
    pub upper: f64,
    /// True when the classical branch (H₁ + H₂ ≤ ln 2) was used.
    pub classical_branch: bool,
}

/// Conjectured optimal lower bound (classical Mrs. Gerber below H₁+H₂ = ln 2,
/// its dual image above) and the conjectured upper bound.
pub fn conjecture_bounds(h1: f64, h2_: f64) -> Result<ConjectureBounds> {
    let (h1, h2_) = (check_entropy(h1)?, check_entropy(h2_)?);
    let classical_branch = h1 + h2_ <= LN2;
    let lower = if classical_branch {
        classical_mgl(h1, h2_)?
    } else {
        h1 + h2_ - LN2 + classical_mgl(LN2 - h1, LN2 - h2_)?
    };
    Ok(ConjectureBounds { lower, upper: classical_upper(h1, h2_)?, classical_branch })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> impl Iterator<Item = f64> + Clone {
        (0..n).map(move |k| LN2 * k as f64 / (n - 1) as f64)
    }

    /// Independent inverse of h₂ on [0, ½] in bits-free form, by plain bisection.
    fn inv_oracle(h: f64) -> f64 {
        let f = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.ln() - (1.0 - p) * (1.0 - p).ln() };
        let (mut a, mut b) = (0.0, 0.5);
        for _ in 0..100 {
            let m = 0.5 * (a + b);
            if f(m) < h {
                a = m
            } else {
                b = m
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn convolution() {
        assert_eq!(convolve(0.0, 0.3).unwrap(), 0.3);
        assert_eq!(convolve(0.5, 0.3).unwrap(), 0.5);
        assert!((convolve(0.11, 0.3).unwrap() - (0.11 * 0.7 + 0.89 * 0.3)).abs() < 1e-16);
        assert!(convolve(1.2, 0.3).is_err());
    }

    #[test]
    fn classical_bounds() {
        for h in grid(11) {
            assert!((classical_mgl(0.0, h).unwrap() - h).abs() < 1e-12);
            assert!((classical_upper(0.0, h).unwrap() - h).abs() < 1e-12);
            assert!((classical_mgl(LN2, h).unwrap() - LN2).abs() < 1e-12);
            assert!((classical_upper(LN2, h).unwrap() - LN2).abs() < 1e-12);
        }
        let (p, q) = (inv_oracle(0.3), inv_oracle(0.5));
        let c = p * (1.0 - q) + (1.0 - p) * q;
        let oracle = -c * c.ln() - (1.0 - c) * (1.0 - c).ln();
        assert!((classical_mgl(0.3, 0.5).unwrap() - oracle).abs() < 1e-12);
        for h1 in grid(101) {
            for h2_ in grid(101) {
                assert!(classical_mgl(h1, h2_).unwrap() <= classical_upper(h1, h2_).unwrap() + 1e-12);
            }
        }
    }

    #[test]
    fn gx_bound_sits_below_mgl() {
        assert_eq!(gx_lower(0.0).unwrap(), 0.0);
        assert!((gx_lower(LN2).unwrap() - LN2).abs() < 1e-15);
        assert!((gx_lower(0.4).unwrap() - (0.799 * 0.4 * (LN2 - 0.4) / LN2 + 0.4)).abs() < 1e-15);
        let mut worst: f64 = 0.0;
        for h in grid(1001) {
            let gap = classical_mgl(h, h).unwrap() - gx_lower(h).unwrap();
            assert!(gap >= -1e-12, "{h}: {gap}");
            worst = worst.max(gap);
        }
        // largest gap on the grid, at H ≈ 0.512
        assert!((worst - 0.01533).abs() < 1e-4, "{worst}");
    }

    /// The first term again, written through f, g directly.
    fn term1_oracle(h1: f64, h2_: f64) -> f64 {
        let f = 1.0 - 2.0 * inv_oracle(LN2 - h1);
        let g = h2_.exp() - 1.0;
        let a = ((f * g).acos() - g.acos()) / 2.0;
        h1 - 2.0 * a.cos().ln()
    }

    #[test]
    fn two_state_bound() {
        let t = qmgl_two_terms(0.3, 0.45).unwrap();
        assert!((t[0] - term1_oracle(0.3, 0.45)).abs() < 1e-12);
        assert!((t[1] - term1_oracle(0.45, 0.3)).abs() < 1e-12);
        // dual terms: H₁ + H₂ − ln 2 + first term at the dual entropies
        assert!((t[2] - (0.3 + 0.45 - LN2 + term1_oracle(LN2 - 0.3, LN2 - 0.45))).abs() < 1e-12);
        assert!((t[3] - (0.3 + 0.45 - LN2 + term1_oracle(LN2 - 0.45, LN2 - 0.3))).abs() < 1e-12);
        let v = qmgl_two(0.3, 0.45).unwrap();
        assert!(v > 0.45 + 1e-4);
        for h in grid(9) {
            assert!((qmgl_two(h, 0.0).unwrap() - h).abs() < 1e-12);
            assert!((qmgl_two(LN2, h).unwrap() - LN2).abs() < 1e-12);
        }
        for h1 in grid(41) {
            for h2_ in grid(41) {
                let v = qmgl_two(h1, h2_).unwrap();
                let m = h1.max(h2_);
                assert!(v >= m - 1e-12);
                let interior = h1 > 1e-9 && h1 < LN2 - 1e-9 && h2_ > 1e-9 && h2_ < LN2 - 1e-9;
                if interior {
                    assert!(v > m + 1e-12, "{h1} {h2_}");
                }
            }
        }
    }

    #[test]
    fn iid_bound() {
        assert_eq!(qmgl_iid(0.0).unwrap(), 0.0);
        let mid = 0.5 * LN2;
        assert!((iid_low(mid) - iid_high(mid)).abs() < 1e-12);
        for h in grid(501) {
            let v = qmgl_iid(h).unwrap();
            assert!(v >= qmgl_iid_convenient(h).unwrap() - 1e-12, "{h}");
            let mirrored = qmgl_iid(LN2 - h).unwrap();
            assert!(((v - h) - (mirrored - (LN2 - h))).abs() < 1e-12);
        }
        let x: f64 = 1.0 - 2.0 * inv_oracle(LN2 - 0.6);
        let oracle = 0.6 - 2.0 * ((0.5 * (x * x).acos() - 0.5 * x.acos()).cos()).ln();
        assert!((qmgl_iid(0.6).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn conjectured_bounds() {
        let b = conjecture_bounds(0.3, LN2 - 0.3).unwrap();
        let upper_branch = 0.3 + (LN2 - 0.3) - LN2 + classical_mgl(LN2 - 0.3, 0.3).unwrap();
        assert!((b.lower - upper_branch).abs() < 1e-12);
        assert!((conjecture_bounds(LN2, 0.2).unwrap().lower - LN2).abs() < 1e-12);
        for h1 in grid(51) {
            for h2_ in grid(51) {
                let b = conjecture_bounds(h1, h2_).unwrap();
                assert!(b.lower <= b.upper + 1e-12);
            }
        }
    }
}
