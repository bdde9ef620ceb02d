//! Real zeros of J_ν (ν ≥ 0) and Ai by scanning and bracket refinement.

use super::airy::{airy, AiryKind};
use super::bessel::bessel_j;
use crate::cover::CoverPoint;
use crate::error::{Error, Result};
use crate::roots::refine_bracket;
use crate::C64;

const SCAN_STEP: f64 = 0.25;
const ZERO_TOL: f64 = 1e-14;

fn scan_zeros(f: impl Fn(f64) -> Result<f64>, start: f64, count: usize, limit: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(count);
    let mut a = start;
    let mut fa = f(a)?;
    while out.len() < count {
        let b = a + SCAN_STEP;
        if b > limit {
            return Err(Error::Search(format!("found only {} of {count} zeros below {limit}", out.len())));
        }
        let fb = f(b)?;
        if fb == 0.0 {
            out.push(b);
        } else if fa != 0.0 && fa.signum() != fb.signum() {
            let (x, _, _, _) = refine_bracket(&f, a, fa, b, fb, ZERO_TOL)?;
            out.push(x);
        }
        a = b;
        fa = fb;
    }
    Ok(out)
}

/// First `count` positive zeros `j_{ν,1} < j_{ν,2} < …` of `J_ν`, `ν ≥ 0`.
pub fn jnu_positive_zeros(nu: f64, count: usize) -> Result<Vec<f64>> {
    if !(nu >= 0.0) || count == 0 {
        return Err(Error::Domain(format!("need nu ≥ 0 and count ≥ 1, got nu = {nu}, count = {count}")));
    }
    let f = |x: f64| Ok(bessel_j(C64::new(nu, 0.0), CoverPoint::real(x), 1e-10)?.re);
    // J_ν has no zeros in (0, ν]
    let start = nu.max(1e-3);
    let limit = start + 4.0 * (count as f64 + 2.0) * std::f64::consts::PI;
    scan_zeros(f, start, count, limit)
}

/// Magnitudes `|a_0| < |a_1| < …` of the first `count` zeros of Ai.
pub fn airy_negative_zeros(count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::Domain("count must be ≥ 1".into()));
    }
    let f = |t: f64| Ok(airy(AiryKind::Ai, C64::new(-t, 0.0), 1e-13)?.re);
    let limit = 10.0 + 3.0 * (count as f64).powf(2.0 / 3.0) * 4.0;
    scan_zeros(f, 0.0, count, limit)
}
