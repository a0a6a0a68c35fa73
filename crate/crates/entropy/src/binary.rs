use crate::{EntropyError, Result};
use numkernel::LN2;

/// h₂(p) = −p ln p − (1−p) ln(1−p).
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(EntropyError::Range(p));
    }
    Ok(crate::shannon(&[p, 1.0 - p]))
}

/// Inverse of h₂ on [0, 1/2], by bisection to machine precision.
pub fn binary_entropy_inv(h: f64) -> Result<f64> {
    if !(-1e-15..=LN2 + 1e-15).contains(&h) {
        return Err(EntropyError::Range(h));
    }
    let h = h.clamp(0.0, LN2);
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if crate::shannon(&[mid, 1.0 - mid]) < h {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
