//! Zero location for real functions: grid scan, bracket refinement,
//! counting, and the density law.

use crate::determinants::q_det;
use crate::error::{Error, Result};
use crate::oscillator::{rescale_params, Branch, OscillatorParams, RescaledParams};
use crate::specfun::airy_negative_zeros;
use crate::C64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// A refined zero of a real function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroRecord {
    pub index: usize,
    pub location: f64,
    pub bracket: (f64, f64),
    /// Half-width of the final bracket.
    pub refinement_residual: f64,
}

/// Brent's method on a sign-change bracket.  Returns
/// `(root, bracket_lo, bracket_hi, half_width)`; stops once the bracket
/// half-width is below `tol·max(1, |x|)`.
pub fn refine_bracket(
    f: &dyn Fn(f64) -> Result<f64>,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    tol: f64,
) -> Result<(f64, f64, f64, f64)> {
    if fa == 0.0 {
        return Ok((a, a, a, 0.0));
    }
    if fb == 0.0 {
        return Ok((b, b, b, 0.0));
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Search(format!("no sign change on [{a}, {b}]")));
    }
    let (mut a, mut fa, mut b, mut fb) = (a, fa, b, fb);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol * b.abs().max(1.0);
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            let (lo, hi) = if b < c { (b, c) } else { (c, b) };
            return Ok((b, lo, hi, xm.abs()));
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
    }
    Err(Error::Search("bracket refinement did not converge".into()))
}

/// Scans `f` on `n_grid` equispaced points of `interval`, and refines every
/// sign change.  Grid evaluation and refinement run in parallel; results
/// are ordered by position.
pub fn scan_and_refine(
    f: &(dyn Fn(f64) -> Result<f64> + Sync),
    interval: (f64, f64),
    n_grid: usize,
    tol: f64,
) -> Result<Vec<ZeroRecord>> {
    let (lo, hi) = interval;
    if n_grid < 2 || !(hi >= lo) {
        return Err(Error::Domain(format!("scan needs n_grid ≥ 2 and lo ≤ hi, got {n_grid}, [{lo}, {hi}]")));
    }
    if hi == lo {
        return Ok(Vec::new());
    }
    let h = (hi - lo) / (n_grid - 1) as f64;
    let xs: Vec<f64> = (0..n_grid).map(|i| if i + 1 == n_grid { hi } else { lo + i as f64 * h }).collect();
    let fs: Vec<f64> = xs.par_iter().map(|&x| f(x)).collect::<Result<_>>()?;
    let mut brackets = Vec::new();
    for i in 0..n_grid - 1 {
        if fs[i] == 0.0 {
            brackets.push((xs[i], xs[i], fs[i], fs[i]));
        } else if fs[i + 1] != 0.0 && fs[i].signum() != fs[i + 1].signum() {
            brackets.push((xs[i], xs[i + 1], fs[i], fs[i + 1]));
        }
    }
    if fs[n_grid - 1] == 0.0 {
        brackets.push((hi, hi, 0.0, 0.0));
    }
    let refined: Vec<(f64, f64, f64, f64)> = brackets
        .par_iter()
        .map(|&(a, b, fa, fb)| if a == b { Ok((a, a, a, 0.0)) } else { refine_bracket(f, a, fa, b, fb, tol) })
        .collect::<Result<_>>()?;
    Ok(refined
        .into_iter()
        .enumerate()
        .map(|(index, (x, a, b, r))| ZeroRecord { index, location: x, bracket: (a, b), refinement_residual: r })
        .collect())
}

/// `Re Q₊` at real parameters; errors on a non-finite value.
fn q_plus_real(params: &OscillatorParams, tol: f64) -> Result<f64> {
    let q = q_det(params, Branch::Plus, tol)?.value;
    if !q.re.is_finite() {
        return Err(Error::Precision(format!("Q+ not representable at E = {}", params.e)));
    }
    Ok(q.re)
}

/// Zeros of `E ↦ Q₊(E; ℓ)` in `(0, E_max]`.  The grid carries at least
/// twelve points per zero expected from the Weyl count `E^{(α+1)/(2α)}/π`.
pub fn q_zeros(alpha: f64, ell: f64, e_max: f64, tol: f64) -> Result<Vec<ZeroRecord>> {
    if !(ell > -0.5) {
        return Err(Error::Domain(format!("ell must exceed -1/2, got {ell}")));
    }
    if !(e_max > 0.0) {
        return Ok(Vec::new());
    }
    OscillatorParams::real(alpha, 0.0, ell)?;
    let expected = e_max.powf((alpha + 1.0) / (2.0 * alpha)) / PI;
    let n = (12.0 * (expected + 2.0)).ceil() as usize;
    let ode_tol = tol.min(1e-9);
    let f = move |e: f64| q_plus_real(&OscillatorParams::real(alpha, e, ell)?, ode_tol);
    let lo = e_max * 1e-9;
    scan_and_refine(&f, (lo, e_max), n, tol)
}

/// `F(ε) = √(ε²−1) − arctan√(ε²−1)`.
fn density_antiderivative(eps: f64) -> f64 {
    let w = (eps * eps - 1.0).max(0.0).sqrt();
    w - w.atan()
}

/// `(2p/π)∫_{I₁} √(ε²−1)/ε dε` from the closed antiderivative.
pub fn density_integral(interval: (f64, f64), p: f64) -> Result<f64> {
    let (a, b) = interval;
    if !(a >= 1.0 && b >= a) {
        return Err(Error::Domain(format!("density interval must lie in [1, inf), got [{a}, {b}]")));
    }
    Ok(2.0 * p / PI * (density_antiderivative(b) - density_antiderivative(a)))
}

/// Zeros of `ε ↦ Q₊(4p²(α+1)²ε²; 2p(α+1)−1/2)` on `interval`, scanned with
/// `samples_per_zero` points per local zero spacing `πε/(2p(α+1)√(ε²−1))`
/// at the upper endpoint.
pub fn eps_zeros(alpha: f64, p: f64, interval: (f64, f64), tol: f64, samples_per_zero: f64) -> Result<Vec<ZeroRecord>> {
    let (a, b) = interval;
    if !(a > 1.0) || !(b >= a) {
        return Err(Error::Domain(format!("interval must lie in (1, inf), got [{a}, {b}]")));
    }
    if !(p > 0.0) {
        return Err(Error::Domain(format!("p must be positive, got {p}")));
    }
    if b == a {
        return Ok(Vec::new());
    }
    let nu = 2.0 * p * (alpha + 1.0);
    let spacing = PI * b / (nu * (b * b - 1.0).sqrt());
    let n = ((b - a) / spacing * samples_per_zero).ceil() as usize + 2;
    let ode_tol = tol.min(1e-9);
    let f = move |eps: f64| {
        let rp = RescaledParams::new(alpha, C64::new(eps, 0.0), C64::new(p, 0.0))?;
        q_plus_real(&rescale_params(&rp)?, ode_tol)
    };
    scan_and_refine(&f, (a, b), n, tol)
}

/// Number of zeros of the rescaled determinant in `interval` (six grid
/// points per expected zero).
pub fn zero_count_eps(alpha: f64, p: f64, interval: (f64, f64), tol: f64) -> Result<usize> {
    Ok(eps_zeros(alpha, p, interval, tol, 6.0)?.len())
}

/// The first `count` zeros in `η` of `Q₊` at `ε = 1 + η/(α+1)^{2/3}`,
/// `ℓ = 2p(α+1) − 1/2`.  The scan starts at `η = −max(3, (α+1)^{2/3}/5)`
/// (capped at `ε = 1/2`), since at moderate `α` the first zero can sit at
/// `η < 0`.
pub fn airy_scaled_zeros(alpha: f64, p: f64, count: usize, tol: f64) -> Result<Vec<ZeroRecord>> {
    if !(p > 0.0) {
        return Err(Error::Domain(format!("p must be positive, got {p}")));
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let a = airy_negative_zeros(count + 1)?;
    let scale = 2.0 * p.powf(2.0 / 3.0);
    let gap = (a[count] - a[count - 1]).abs() / scale;
    let mut hi = 1.5 * a[count - 1].abs() / scale + 1.0;
    let ode_tol = tol.min(1e-9);
    let f = move |eta: f64| {
        let rp = RescaledParams::from_eta(alpha, C64::new(eta, 0.0), C64::new(p, 0.0))?;
        q_plus_real(&rescale_params(&rp)?, ode_tol)
    };
    let a23 = (alpha + 1.0).powf(2.0 / 3.0);
    let lo = -(0.2 * a23).max(3.0).min(0.5 * a23);
    for _ in 0..4 {
        let n = ((hi - lo) / gap * 12.0).ceil() as usize + 2;
        let mut z = scan_and_refine(&f, (lo, hi), n, tol)?;
        if z.len() >= count {
            z.truncate(count);
            return Ok(z);
        }
        hi *= 2.0;
    }
    Err(Error::Search(format!("fewer than {count} zeros found in eta <= {hi}")))
}
