//! Frobenius solutions `χ±` at the origin.
//!
//! `χ₊ = x^{ℓ+1}/Γ(1+β) · Σ_{j,n} b_{j,n} (E x²)^n (x^{2α+2})^j` with
//! `β = (ℓ+1/2)/(α+1)`, `b_{0,0} = 1` and
//! `k(k+2ℓ+1)·b_{j,n} = b_{j−1,n} − b_{j,n−1}`, `k = 2n + (2α+2)j`.
//! `χ₋` is the same construction with `ℓ → −ℓ−1`.  In the variable
//! `ξ = Ex²/(4α²)` the coefficients are `c_{j,m} = b_{j,m−j}(4α²)^m`.

use crate::cover::CoverPoint;
use crate::error::{Error, Result};
use crate::ode::{integrate_segment, Segment, SolutionSample};
use crate::oscillator::{potential, Branch, OscillatorParams};
use crate::specfun::rgamma;
use crate::C64;

/// Truncated coefficient table for `χ±`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusSeries {
    pub branch: Branch,
    pub alpha: f64,
    pub ell: C64,
    /// `b[j][n]`, `0 ≤ j ≤ J`, `0 ≤ n ≤ N`.
    b: Vec<Vec<C64>>,
    /// `(J, N)`.
    pub truncation: (usize, usize),
}

/// A Frobenius evaluation with its truncation and cancellation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSample {
    pub sample: SolutionSample,
    /// Estimated relative size of the neglected terms.
    pub tail_estimate: f64,
    /// `Σ|terms| / |Σ terms|`, the factor by which rounding is amplified.
    pub cancellation: f64,
}

impl FrobeniusSeries {
    /// Exponent shift `λ`: `ℓ` for `χ₊`, `−ℓ−1` for `χ₋`.
    pub fn lambda(&self) -> C64 {
        match self.branch {
            Branch::Plus => self.ell,
            Branch::Minus => -self.ell - 1.0,
        }
    }

    /// `b_{j,n}` (zero outside the table).
    pub fn b(&self, j: usize, n: usize) -> C64 {
        self.b.get(j).and_then(|r| r.get(n)).copied().unwrap_or_default()
    }

    /// `c_{j,m}`, the coefficient of `ξ^m (x^{2α}/E)^j`.
    pub fn coeff(&self, j: usize, m: usize) -> C64 {
        if m < j {
            return C64::default();
        }
        self.b(j, m - j) * (4.0 * self.alpha * self.alpha).powi(m as i32)
    }
}

/// Builds the coefficient table up to `j ≤ jmax`, `n ≤ nmax`.
pub fn build_series(params: &OscillatorParams, branch: Branch, jmax: usize, nmax: usize) -> Result<FrobeniusSeries> {
    let lam = match branch {
        Branch::Plus => params.ell,
        Branch::Minus => -params.ell - 1.0,
    };
    let a2 = 2.0 * params.alpha + 2.0;
    let thresh = 1e-8 * (1.0 + params.ell.norm()).powi(2);
    let mut b = vec![vec![C64::default(); nmax + 1]; jmax + 1];
    b[0][0] = C64::new(1.0, 0.0);
    for j in 0..=jmax {
        for n in 0..=nmax {
            if j == 0 && n == 0 {
                continue;
            }
            let k = 2.0 * n as f64 + a2 * j as f64;
            let d = k * (k + 2.0 * lam + 1.0);
            if (d / (4.0 * params.alpha * params.alpha)).norm() < thresh {
                return Err(Error::Resonance { j, m: n + j, divisor: d.norm() });
            }
            let up = if j > 0 { b[j - 1][n] } else { C64::default() };
            let left = if n > 0 { b[j][n - 1] } else { C64::default() };
            b[j][n] = (up - left) / d;
        }
    }
    Ok(FrobeniusSeries { branch, alpha: params.alpha, ell: params.ell, b, truncation: (jmax, nmax) })
}

/// Value and derivative of `χ±` at `x` for energy `e`, with diagnostics.
/// Fails with a truncation error when the tail exceeds `tol`.
pub fn chi_eval(series: &FrobeniusSeries, x: CoverPoint, e: C64, tol: f64) -> Result<ChiSample> {
    let lam = series.lambda();
    let s = lam + 1.0;
    let u = e * x.pow(2.0).to_complex();
    let w = x.pow(2.0 * series.alpha + 2.0).to_complex();
    let (jmax, nmax) = series.truncation;
    let mut s0 = C64::default();
    let mut s1 = C64::default();
    let mut abs0 = 0.0;
    let mut abs1 = 0.0;
    let mut last_row = 0.0;
    let mut last_col = 0.0;
    let mut wj = C64::new(1.0, 0.0);
    for j in 0..=jmax {
        let mut un = C64::new(1.0, 0.0);
        for n in 0..=nmax {
            let t = series.b[j][n] * un * wj;
            let ex = 2.0 * n as f64 + (2.0 * series.alpha + 2.0) * j as f64;
            let td = t * (s + ex);
            s0 += t;
            s1 += td;
            abs0 += t.norm();
            abs1 += td.norm();
            if n == nmax && nmax > 0 {
                last_row += t.norm();
            }
            if j == jmax && jmax > 0 {
                last_col += t.norm();
            }
            un *= u;
        }
        wj *= w;
    }
    let scale = s0.norm().max(1e-300);
    let tail = (last_row + last_col) / scale;
    let cancellation = (abs0 / scale).max(abs1 / s1.norm().max(1e-300));
    if !(tail <= tol) {
        return Err(Error::Truncation { tail, tol });
    }
    let lnx = s * x.ln();
    let rg = rgamma(1.0 + lam_beta(series.alpha, lam));
    let phase = C64::from_polar(1.0, lnx.im) * rg;
    let xinv = x.pow(-1.0).to_complex();
    let sample = SolutionSample::new(x, phase * s0, phase * s1 * xinv, lnx.re);
    Ok(ChiSample { sample, tail_estimate: tail, cancellation })
}

fn lam_beta(alpha: f64, lam: C64) -> C64 {
    (lam + 0.5) / (alpha + 1.0)
}

/// Advances `χ±` from `x0` (series) to `x1` along a straight segment.
pub fn chi_extend(
    series: &FrobeniusSeries,
    x0: CoverPoint,
    x1: CoverPoint,
    e: C64,
    tol: f64,
) -> Result<SolutionSample> {
    let start = chi_eval(series, x0, e, tol)?.sample;
    if x0 == x1 {
        return Ok(start);
    }
    let params = OscillatorParams { alpha: series.alpha, e, ell: series.ell };
    let v = |x: CoverPoint| potential(&params, x);
    let seg = if (x0.arg - x1.arg).abs() < 1e-15 {
        Segment::Ray { theta: x0.arg, r0: x0.modulus(), r1: x1.modulus() }
    } else {
        Segment::Line { from: x0, to: x1 }
    };
    Ok(integrate_segment(&seg, start, &v, tol / 10.0)?.0)
}

/// Series sizes tried by [`chi_at`].
const SIZES: [(usize, usize); 6] = [(4, 16), (8, 32), (16, 64), (32, 128), (64, 256), (128, 512)];

/// Evaluates the series at `x` with the smallest adequate table.
pub fn chi_series_auto(params: &OscillatorParams, branch: Branch, x: CoverPoint, tol: f64) -> Result<ChiSample> {
    let mut last = Err(Error::Truncation { tail: f64::INFINITY, tol });
    for &(j, n) in &SIZES {
        let series = build_series(params, branch, j, n)?;
        last = chi_eval(&series, x, params.e, tol);
        if last.is_ok() {
            break;
        }
    }
    last
}

/// `χ±` at `x`: directly from the series when it is well conditioned,
/// otherwise seeded at a smaller radius on the same ray and continued by
/// the ODE.
pub fn chi_at(params: &OscillatorParams, branch: Branch, x: CoverPoint, tol: f64) -> Result<SolutionSample> {
    let mut x0 = x;
    for _ in 0..60 {
        if let Ok(c) = chi_series_auto(params, branch, x0, tol / 10.0) {
            if c.cancellation * f64::EPSILON <= tol / 10.0 {
                if x0 == x {
                    return Ok(c.sample);
                }
                let v = |z: CoverPoint| potential(params, z);
                let seg = Segment::Ray { theta: x.arg, r0: x0.modulus(), r1: x.modulus() };
                return Ok(integrate_segment(&seg, c.sample, &v, tol / 10.0)?.0);
            }
        }
        x0 = x0.scale(0.5);
    }
    Err(Error::Precision(format!("no well-conditioned Frobenius seed below |x| = {}", x.modulus())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma;
    use std::f64::consts::PI;

    fn c(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    #[test]
    fn coefficient_examples() {
        let p = OscillatorParams::real(3.0, 1.0, 0.4).unwrap();
        let s = build_series(&p, Branch::Plus, 3, 3).unwrap();
        assert_eq!(s.coeff(0, 0), c(1.0));
        assert_eq!(s.coeff(1, 0), c(0.0));
        // j = 0, n = 1: 2(2ℓ+3) b = −1
        let want = -2.0 * 9.0 / (2.0 * 0.4 + 3.0);
        assert!((s.coeff(0, 1) - c(want)).norm() < 1e-13);
        // j = 1, n = 0: (2α+2)(2α+2ℓ+3) b = 1
        assert!((s.b(1, 0) - c(1.0 / (8.0 * 9.8))).norm() < 1e-15);
    }

    #[test]
    fn normalization_near_origin() {
        for (alpha, ell) in [(3.0, 0.2), (1.0, 0.0), (5.5, 1.7)] {
            let p = OscillatorParams::real(alpha, 2.0, ell).unwrap();
            let x = CoverPoint::real(1e-5);
            let beta = (ell + 0.5) / (alpha + 1.0);
            let cp = chi_at(&p, Branch::Plus, x, 1e-12).unwrap();
            let r = cp.physical_value() * gamma(c(1.0 + beta)) * 1e-5f64.powf(-ell - 1.0);
            assert!((r - 1.0).norm() < 1e-6, "{r}");
            let cm = chi_at(&p, Branch::Minus, x, 1e-12).unwrap();
            let r = cm.physical_value() * gamma(c(1.0 - beta)) * 1e-5f64.powf(ell);
            assert!((r - 1.0).norm() < 1e-6, "{r}");
        }
    }

    #[test]
    fn frobenius_wronskian() {
        for (alpha, e, ell, x) in [(3.0, c(1.7), c(0.2), 0.6), (5.0, C64::new(1.0, 1.0), c(0.4), 0.9), (8.0, c(-2.0), c(0.7), 1.0)] {
            let p = OscillatorParams::new(alpha, e, ell).unwrap();
            let xp = CoverPoint::real(x);
            let a = chi_at(&p, Branch::Minus, xp, 1e-12).unwrap();
            let b = chi_at(&p, Branch::Plus, xp, 1e-12).unwrap();
            let w = (a.value * b.derivative - a.derivative * b.value) * (a.ledger + b.ledger).exp();
            let beta = (ell + 0.5) / (alpha + 1.0);
            let want = (2.0 * alpha + 2.0) / PI * (PI * beta).sin();
            assert!((w - want).norm() < 1e-10, "{w} {want}");
        }
    }

    #[test]
    fn ode_residual() {
        let p = OscillatorParams::real(5.0, 2.0, 0.3).unwrap();
        let h = 1e-4;
        let d = |r: f64| chi_at(&p, Branch::Plus, CoverPoint::real(r), 1e-13).unwrap();
        let mid = d(0.3);
        let second = (d(0.3 + h).physical_derivative() - d(0.3 - h).physical_derivative()) / (2.0 * h);
        let res = second - potential(&p, CoverPoint::real(0.3)) * mid.physical_value();
        assert!(res.norm() < 1e-7 * mid.physical_derivative().norm(), "{res}");
    }

    #[test]
    fn bessel_column_at_large_degree() {
        // α = 200: x^{2α+2} is negligible on x ≤ 0.9, so χ₊ = sin(√E x)/(√E Γ(1+β)) for ℓ = 0
        let alpha = 200.0;
        let beta = 0.5 / (alpha + 1.0);
        for e in [4.0, 400.0, 4000.0] {
            let p = OscillatorParams::real(alpha, e, 0.0).unwrap();
            for x in [0.3, 0.9] {
                let s = chi_at(&p, Branch::Plus, CoverPoint::real(x), 1e-11).unwrap();
                let k = f64::sqrt(e);
                let want = (k * x).sin() / (k * gamma(c(1.0 + beta)).re);
                let dwant = (k * x).cos() / gamma(c(1.0 + beta)).re;
                assert!((s.physical_value() - want).norm() < 1e-8 * (1.0 / k), "E={e} x={x}");
                assert!((s.physical_derivative() - dwant).norm() < 1e-8, "E={e} x={x}");
            }
        }
    }

    #[test]
    fn extension_matches_series() {
        let p = OscillatorParams::real(3.0, 1.0, 0.0).unwrap();
        let s = build_series(&p, Branch::Plus, 32, 64).unwrap();
        let x0 = CoverPoint::real(0.2);
        let x1 = CoverPoint::real(0.8);
        let ext = chi_extend(&s, x0, x1, p.e, 1e-11).unwrap();
        let dir = chi_eval(&s, x1, p.e, 1e-11).unwrap().sample;
        assert!((ext.physical_value() - dir.physical_value()).norm() < 1e-9);
        assert!((ext.physical_derivative() - dir.physical_derivative()).norm() < 1e-9);
        assert_eq!(chi_extend(&s, x0, x0, p.e, 1e-11).unwrap(), chi_eval(&s, x0, p.e, 1e-11).unwrap().sample);
    }

    #[test]
    fn monodromy_eigenvalue() {
        let alpha = 3.0;
        let ell = c(0.35);
        let e = C64::new(1.2, 0.4);
        let x = CoverPoint::from_polar(0.7, 0.1).unwrap();
        let rot = C64::from_polar(1.0, -2.0 * PI / (alpha + 1.0));
        for (branch, lam) in [(Branch::Plus, ell), (Branch::Minus, -ell - 1.0)] {
            let p = OscillatorParams::new(alpha, e, ell).unwrap();
            let q = OscillatorParams::new(alpha, e * rot, ell).unwrap();
            let a = chi_at(&p, branch, x, 1e-12).unwrap().physical_value();
            let b = chi_at(&q, branch, x.rotate(1, alpha), 1e-12).unwrap().physical_value();
            let mu = (C64::new(0.0, PI) * (lam + 1.0) / (alpha + 1.0)).exp();
            assert!((b - mu * a).norm() < 1e-11 * a.norm());
        }
    }

    #[test]
    fn resonant_minus_branch_is_rejected() {
        // ℓ + 1/2 = 1 + (α+1)·0
        let p = OscillatorParams::real(3.0, 1.0, 0.5).unwrap();
        assert!(matches!(build_series(&p, Branch::Minus, 4, 4), Err(Error::Resonance { .. })));
        assert!(build_series(&p, Branch::Plus, 4, 4).is_ok());
    }

    #[test]
    fn energy_zero_is_regular() {
        let p = OscillatorParams::real(4.0, 0.0, 0.3).unwrap();
        let s = chi_at(&p, Branch::Plus, CoverPoint::real(1.0), 1e-12).unwrap();
        assert!(s.physical_value().norm().is_finite() && s.physical_value().norm() > 0.0);
    }

    #[test]
    fn tail_shrinks_with_table_size() {
        let p = OscillatorParams::real(2.0, 5.0, 0.1).unwrap();
        let x = CoverPoint::real(0.9);
        let t = |j, n| chi_eval(&build_series(&p, Branch::Plus, j, n).unwrap(), x, p.e, 1.0).unwrap().tail_estimate;
        assert!(t(8, 16) <= t(4, 16));
        assert!(t(8, 32) <= t(8, 16));
    }
}
