//! Bessel functions of the first and second kind and Hankel functions of
//! complex order on the universal cover.

use super::dd::{CDd, Dd};
use super::gamma::{rgamma, EULER_GAMMA};
use super::modified::asymptotic_coeff;
use super::{cos_pi, sin_ratio, AsymptoticEval, SeriesEval};
use crate::cover::CoverPoint;
use crate::error::{Error, Result};
use crate::C64;
use std::f64::consts::PI;

const MAX_TERMS: usize = 2000;
/// Below this modulus the power series is used.
const SERIES_RADIUS: f64 = 20.0;
/// Half-width of the near-integer order window for Y.
const Y_WINDOW: f64 = 1e-3;
/// Node spacing of the quartic interpolant inside the window.
const Y_NODE: f64 = 2e-3;

/// `s z²/4` in double-double.
pub(crate) fn quarter_square(z: C64, s: f64) -> CDd {
    let zd = CDd::from_c64(z);
    zd.mul(zd).scale(Dd::from_f64(0.25 * s))
}

/// `Σ_k w^k / (k! Γ(ν+k+1))` in double-double arithmetic.
pub(crate) fn gamma_series(nu: C64, wd: CDd) -> Result<SeriesEval> {
    let w = wd.to_c64();
    let nud = CDd::from_c64(nu);
    let mut term = CDd::from_c64(rgamma(nu + 1.0));
    let mut sum = term;
    let mut k = 0usize;
    loop {
        k += 1;
        if k > MAX_TERMS {
            return Err(Error::Truncation { tail: term.norm() / sum.norm().max(1e-300), tol: 1e-16 });
        }
        let kk = k as f64;
        if term == CDd::ZERO {
            // preceding terms sat on poles of Γ; restart from the closed form
            let t = w.powu(k as u32) * rgamma(nu + kk + 1.0) / factorial(k);
            term = CDd::from_c64(t);
        } else {
            let den = nud.add(CDd::from_c64(C64::new(kk, 0.0))).scale(Dd::from_f64(kk));
            term = term.mul(wd).div(den);
        }
        sum = sum.add(term);
        let ratio = w.norm() / ((kk + 1.0) * (nu + kk + 1.0).norm());
        let tn = term.norm();
        let sn = sum.norm();
        if ratio < 0.5 && tn <= 1e-17 * sn {
            let tail = if sn > 0.0 { tn * ratio / (1.0 - ratio) / sn } else { 0.0 };
            return Ok(SeriesEval { value: sum.to_c64(), terms_used: k + 1, tail_estimate: tail });
        }
        if ratio < 0.5 && sn == 0.0 && tn == 0.0 && k > 2 {
            return Ok(SeriesEval { value: C64::new(0.0, 0.0), terms_used: k + 1, tail_estimate: 0.0 });
        }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |a, j| a * j as f64)
}

/// Nearest integer to ν when ν is within `w` of it.
fn near_integer(nu: C64, w: f64) -> Option<i64> {
    let n = nu.re.round();
    if (nu - n).norm() < w {
        Some(n as i64)
    } else {
        None
    }
}

/// Power series for `J_ν(z)` with the branch of `(z/2)^ν` fixed by the cover.
pub fn bessel_j_series(nu: C64, z: CoverPoint) -> Result<SeriesEval> {
    if nu.im == 0.0 && nu.re < 0.0 && nu.re == nu.re.round() {
        let s = bessel_j_series(-nu, z)?;
        let sign = if (nu.re as i64) % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(SeriesEval { value: s.value * sign, ..s });
    }
    let zc = z.to_complex();
    let s = gamma_series(nu, quarter_square(zc, -1.0))?;
    let half = z.scale(0.5);
    let pre = half.cpow(nu);
    Ok(SeriesEval { value: pre * s.value, ..s })
}

/// Hankel's expansions at a point with `|arg w| ≤ π/2`; returns
/// `(H¹, H², bound)` with a relative bound taken as the first omitted term.
fn hankel_pair_asymptotic(nu: C64, w: C64) -> Option<(C64, C64, f64)> {
    let chi = w - nu * (PI / 2.0) - PI / 4.0;
    let pref = (2.0 / (PI * w)).sqrt();
    let mut s1 = C64::new(1.0, 0.0);
    let mut s2 = C64::new(1.0, 0.0);
    let iu = C64::new(0.0, 1.0);
    let mut ipow = C64::new(1.0, 0.0);
    let mut wpow = C64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..80u32 {
        ipow *= iu;
        wpow *= w;
        let t = asymptotic_coeff(k, nu) / wpow;
        let tn = t.norm();
        if tn > last {
            return None;
        }
        if tn < 1e-17 {
            let h1 = pref * (iu * chi).exp() * s1;
            let h2 = pref * (-iu * chi).exp() * s2;
            return Some((h1, h2, tn));
        }
        s1 += ipow * t;
        s2 += ipow.conj() * t;
        last = tn;
    }
    None
}

/// Hankel-expansion value of `H^{(kind)}_ν(z)` for `|arg z| ≤ π/2`, with
/// the first omitted term as the remainder estimate.
pub fn hankel_asymptotic(kind: u8, nu: C64, z: CoverPoint) -> Result<AsymptoticEval> {
    if z.arg.abs() > PI / 2.0 + 1e-12 {
        return Err(Error::Domain("hankel_asymptotic needs |arg z| ≤ π/2".into()));
    }
    let w = z.to_complex();
    let (h1, h2, b) = hankel_pair_asymptotic(nu, w)
        .ok_or_else(|| Error::Precision(format!("Hankel expansion diverges at |z| = {}", z.modulus())))?;
    let v = if kind == 1 { h1 } else { h2 };
    Ok(AsymptoticEval { value: v, n_terms: 0, remainder_bound: b * v.norm() })
}

/// J and Y from Hankel's expansions at the right-half-plane representative
/// of z, continued to the sheet of z.
fn jy_asymptotic(nu: C64, z: CoverPoint) -> Option<(C64, C64)> {
    if z.modulus() < SERIES_RADIUS || z.modulus() < 0.5 * nu.norm_sqr() {
        return None;
    }
    let (w, m) = z.right_half_plane();
    let (h1, h2, _) = hankel_pair_asymptotic(nu, w.to_complex())?;
    let j = (h1 + h2) / 2.0;
    let y = (h1 - h2) / C64::new(0.0, 2.0);
    if m == 0 {
        return Some((j, y));
    }
    let mf = m as f64;
    let jm = (nu * C64::new(0.0, mf * PI)).exp() * j;
    let c = cos_pi(nu);
    let ym = (nu * C64::new(0.0, -mf * PI)).exp() * y + C64::new(0.0, 2.0) * c * sin_ratio(m, c) * j;
    Some((jm, ym))
}

/// `J_ν(z)` on the cover.
pub fn bessel_j(nu: C64, z: CoverPoint, tol: f64) -> Result<C64> {
    check_tol(tol)?;
    if let Some((j, _)) = jy_asymptotic(nu, z) {
        return Ok(j);
    }
    let s = bessel_j_series(nu, z)?;
    if s.tail_estimate > tol {
        return Err(Error::Truncation { tail: s.tail_estimate, tol });
    }
    Ok(s.value)
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// Generic-order formula `(J_ν cos νπ − J_{−ν}) / sin νπ`.
fn y_generic(nu: C64, z: CoverPoint) -> Result<C64> {
    let jp = bessel_j_series(nu, z)?.value;
    let jm = bessel_j_series(-nu, z)?.value;
    Ok((jp * cos_pi(nu) - jm) / (nu * PI).sin())
}

/// Integer-order logarithmic series for `Y_n`, `n ≥ 0`.
fn y_integer(n: u32, z: CoverPoint) -> Result<C64> {
    let zc = z.to_complex();
    let half = zc / 2.0;
    let log_half = C64::new(z.log_modulus - std::f64::consts::LN_2, z.arg);
    let jn = bessel_j_series(C64::new(n as f64, 0.0), z)?.value;
    // finite sum
    let mut finite = C64::new(0.0, 0.0);
    for k in 0..n {
        let coef = factorial((n - k - 1) as usize) / factorial(k as usize);
        finite += coef * half.powi(2 * k as i32 - n as i32);
    }
    // ψ(k+1) + ψ(n+k+1) weighted series in double-double
    let w = CDd::from_c64(-zc * zc / 4.0);
    let neg_gamma = Dd::new(-EULER_GAMMA, 4.942_915_152_430_645e-18);
    let mut hk = Dd::ZERO;
    let mut hnk = Dd::ZERO;
    for j in 1..=n {
        hnk = hnk.add(Dd::from_f64(1.0).div(Dd::from_f64(j as f64)));
    }
    let mut term = CDd::from_c64(C64::new(1.0 / factorial(n as usize), 0.0));
    let psi_sum = |hk: Dd, hnk: Dd| neg_gamma.add(neg_gamma).add(hk).add(hnk);
    let mut sum = term.scale(psi_sum(hk, hnk));
    let mut k = 0u32;
    loop {
        k += 1;
        if k as usize > MAX_TERMS {
            return Err(Error::Truncation { tail: term.norm(), tol: 1e-16 });
        }
        let kk = k as f64;
        hk = hk.add(Dd::from_f64(1.0).div(Dd::from_f64(kk)));
        hnk = hnk.add(Dd::from_f64(1.0).div(Dd::from_f64(kk + n as f64)));
        term = term.mul(w).div(CDd::from_c64(C64::new(kk * (kk + n as f64), 0.0)));
        let t = term.scale(psi_sum(hk, hnk));
        sum = sum.add(t);
        let ratio = w.norm() / ((kk + 1.0) * (kk + 1.0 + n as f64));
        if ratio < 0.5 && t.norm() <= 1e-17 * sum.norm().max(1e-300) {
            break;
        }
    }
    let series = sum.to_c64() * half.powi(n as i32);
    Ok((-finite + 2.0 * log_half * jn - series) / PI)
}

fn y_integer_signed(n: i64, z: CoverPoint) -> Result<C64> {
    let v = y_integer(n.unsigned_abs() as u32, z)?;
    Ok(if n < 0 && n % 2 != 0 { -v } else { v })
}

/// `Y_ν(z)` on the cover.
pub fn bessel_y(nu: C64, z: CoverPoint, tol: f64) -> Result<C64> {
    check_tol(tol)?;
    if let Some((_, y)) = jy_asymptotic(nu, z) {
        return Ok(y);
    }
    match near_integer(nu, Y_WINDOW) {
        None => y_generic(nu, z),
        Some(n) => {
            let d = nu - n as f64;
            if d == C64::new(0.0, 0.0) {
                return y_integer_signed(n, z);
            }
            // quartic Lagrange interpolation in ν through n + {−2,−1,0,1,2}·h
            let h = Y_NODE;
            let nodes = [-2.0, -1.0, 0.0, 1.0, 2.0];
            let mut acc = C64::new(0.0, 0.0);
            for (i, &ti) in nodes.iter().enumerate() {
                let yi = if ti == 0.0 {
                    y_integer_signed(n, z)?
                } else {
                    y_generic(C64::new(n as f64 + ti * h, 0.0), z)?
                };
                let mut li = C64::new(1.0, 0.0);
                for (j, &tj) in nodes.iter().enumerate() {
                    if i != j {
                        li *= (d - tj * h) / ((ti - tj) * h);
                    }
                }
                acc += li * yi;
            }
            Ok(acc)
        }
    }
}

/// Hankel function `H^{(1)}_ν = J_ν + iY_ν` (kind 1) or `J_ν − iY_ν` (kind 2).
pub fn hankel(kind: u8, nu: C64, z: CoverPoint, tol: f64) -> Result<C64> {
    let j = bessel_j(nu, z, tol)?;
    let y = bessel_y(nu, z, tol)?;
    match kind {
        1 => Ok(j + C64::new(0.0, 1.0) * y),
        2 => Ok(j - C64::new(0.0, 1.0) * y),
        _ => Err(Error::Domain(format!("Hankel kind must be 1 or 2, got {kind}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn r(x: f64) -> CoverPoint {
        CoverPoint::real(x)
    }

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn j_examples() {
        assert!((bessel_j(c(0.0), r(1e-300), TOL).unwrap() - 1.0).norm() < 1e-15);
        assert!(bessel_j(c(0.5), r(PI), TOL).unwrap().norm() < 1e-15);
        // J_1(1) = 0.44005058574493351596 (mpmath)
        assert!((bessel_j(c(1.0), r(1.0), TOL).unwrap().re - 0.440_050_585_744_933_5).abs() < 1e-15);
    }

    #[test]
    fn j_half_integer_closed_forms() {
        for &x in &[0.3, 2.0, 9.0, 16.5, 25.0, 60.0] {
            let exact = (2.0 / (PI * x)).sqrt() * x.sin();
            let v = bessel_j(c(0.5), r(x), TOL).unwrap();
            assert!((v.re - exact).abs() < 1e-14 && v.im.abs() < 1e-14, "x = {x}: {v} vs {exact}");
            let exact = (2.0 / (PI * x)).sqrt() * x.cos();
            let v = bessel_j(c(-0.5), r(x), TOL).unwrap();
            assert!((v.re - exact).abs() < 1e-14, "x = {x}");
        }
    }

    #[test]
    fn j_negative_integer_order() {
        let a = bessel_j(c(-3.0), r(2.2), TOL).unwrap();
        let b = bessel_j(c(3.0), r(2.2), TOL).unwrap();
        assert!((a + b).norm() < 1e-15);
    }

    #[test]
    fn y_examples() {
        assert!(bessel_y(c(0.5), r(PI / 2.0), TOL).unwrap().norm() < 1e-15);
        // Y_0(1) = 0.088256964215676957983 (mpmath)
        assert!((bessel_y(c(0.0), r(1.0), TOL).unwrap().re - 0.088_256_964_215_676_96).abs() < 1e-15);
        // Y_2(3.5) (mpmath)
        let v = bessel_y(c(2.0), r(3.5), TOL).unwrap().re;
        assert!((v - 0.045_371_437_729_180_28).abs() < 1e-14, "{v}");
    }

    #[test]
    fn y_near_integer_window_is_smooth() {
        let z = r(2.7);
        let y0 = bessel_y(c(1.0), z, TOL).unwrap();
        let yp = bessel_y(c(1.0 + 5e-4), z, TOL).unwrap();
        let ym = bessel_y(c(1.0 - 5e-4), z, TOL).unwrap();
        let yfar = bessel_y(c(1.0 + 0.01), z, TOL).unwrap();
        // derivative in ν is O(1): symmetric differences stay consistent
        let d1 = (yp - ym) / 1e-3;
        let d2 = (yfar - y0) / 0.01;
        assert!((d1 - d2).norm() < 0.05, "{d1} {d2}");
        // Y_{1.0005}(2.7) (mpmath)
        assert!((yp.re - 0.227_370_862_957_464_01).abs() < 1e-12, "{yp}");
    }

    #[test]
    fn y_continuation_identity() {
        for &nu in &[0.3, 1.0, 2.5, 0.0004] {
            let z = CoverPoint::from_polar(1.7, 0.4).unwrap();
            let lhs = bessel_y(c(nu), z.rotate_by(PI), TOL).unwrap();
            let nuc = c(nu);
            let rhs = (nuc * C64::new(0.0, -PI)).exp() * bessel_y(nuc, z, TOL).unwrap()
                + C64::new(0.0, 2.0) * cos_pi(nuc) * sin_ratio(1, cos_pi(nuc)) * bessel_j(nuc, z, TOL).unwrap();
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0), "{nu}: {lhs} {rhs}");
        }
    }

    #[test]
    fn hankel_normalization_at_large_argument() {
        let z = 50.0;
        let h = hankel(1, c(0.5), r(z), TOL).unwrap();
        let scaled = (PI * z / 2.0).sqrt() * C64::new(0.0, -(z - PI / 4.0 - PI / 4.0)).exp() * h;
        assert!((scaled - 1.0).norm() < 1e-13, "{scaled}");
    }

    #[test]
    fn series_and_hankel_agree_in_overlap() {
        for &(nu, x, th) in &[(0.0, 21.0, 0.2), (1.3, 24.0, -0.7), (0.5, 26.0, 1.2)] {
            let z = CoverPoint::from_polar(x, th).unwrap();
            let s = bessel_j_series(c(nu), z).unwrap().value;
            let a = jy_asymptotic(c(nu), z).unwrap().0;
            assert!((s - a).norm() < 1e-12 * s.norm().max(1.0), "{nu} {x} {th}: {s} {a}");
        }
    }

    #[test]
    fn j_continuation_on_cover() {
        let z = CoverPoint::from_polar(25.0, 0.3).unwrap();
        let nu = c(0.37);
        for m in [-2i64, 1, 3] {
            let lhs = bessel_j(nu, z.rotate_by(m as f64 * PI), TOL).unwrap();
            let rhs = C64::from_polar(1.0, m as f64 * PI * 0.37) * bessel_j(nu, z, TOL).unwrap();
            assert!((lhs - rhs).norm() < 1e-10 * rhs.norm(), "{m}");
        }
    }
}
