//! Airy functions Ai, Bi and their derivatives for complex argument.
//!
//! `|z| ≤ 10`: Maclaurin series in complex double-double arithmetic.
//! `|z| > 10`: the asymptotic representation for `|arg z| ≤ 2π/3` (with
//! the certified K-remainder bound at order 1/3 or 2/3), and the
//! connection formulas `Ai(z) + ωAi(ωz) + ω²Ai(ω²z) = 0`,
//! `Bi(z) = e^{iπ/6}Ai(ωz) + e^{−iπ/6}Ai(ω̄z)` elsewhere.

use super::dd::{CDd, Dd};
use super::gamma::gamma;
use super::modified::{k_remainder_bound, optimal_sum};
use super::{ledger_add, AsymptoticEval};
use crate::cover::CoverPoint;
use crate::error::{Error, Result};
use crate::C64;
use std::f64::consts::PI;

/// Which Airy function to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AiryKind {
    Ai,
    Bi,
    AiPrime,
    BiPrime,
}

const MACLAURIN_RADIUS: f64 = 10.0;

fn ai0() -> Dd {
    Dd::new(0.355_028_053_887_817_2, 2.052_336_324_362_12e-17)
}
fn aip0() -> Dd {
    Dd::new(-0.258_819_403_792_806_8, 2.522_243_111_610_832e-17)
}
fn bi0() -> Dd {
    Dd::new(0.614_926_627_446_000_7, 5.089_920_779_489_141_6e-17)
}
fn bip0() -> Dd {
    Dd::new(0.448_288_357_353_826_4, -2.536_323_777_441_730_5e-17)
}

/// The four Maclaurin auxiliary sums `(f, g, f', g')`.
fn maclaurin_fg(z: C64) -> [CDd; 4] {
    let zd = CDd::from_c64(z);
    let z3 = zd.mul(zd).mul(zd);
    let one = CDd::from_c64(C64::new(1.0, 0.0));
    let (mut t, mut u, mut s, mut v) = (one, zd, zd.mul(zd).scale(Dd::from_f64(0.5)), one);
    let (mut f, mut g, mut fp, mut gp) = (t, u, s, v);
    let div = |x: CDd, d: f64| x.scale(Dd::from_f64(1.0).div(Dd::from_f64(d)));
    for k in 1..400 {
        let kf = k as f64;
        t = div(t.mul(z3), (3.0 * kf - 1.0) * (3.0 * kf));
        u = div(u.mul(z3), (3.0 * kf) * (3.0 * kf + 1.0));
        v = div(v.mul(z3), (3.0 * kf - 2.0) * (3.0 * kf));
        f = f.add(t);
        g = g.add(u);
        gp = gp.add(v);
        if k >= 2 {
            s = div(s.mul(z3), (3.0 * kf - 1.0) * (3.0 * kf - 3.0));
            fp = fp.add(s);
        }
        let small = 1e-34 * (f.norm() + g.norm() + fp.norm() + gp.norm());
        if k > 3 && t.norm() + u.norm() + s.norm() + v.norm() < small {
            break;
        }
    }
    [f, g, fp, gp]
}

/// Maclaurin series in double-double arithmetic.
pub fn airy_maclaurin(which: AiryKind, z: C64) -> C64 {
    maclaurin(which, z)
}

fn maclaurin(which: AiryKind, z: C64) -> C64 {
    let [f, g, fp, gp] = maclaurin_fg(z);
    let (a, b, x, y) = match which {
        AiryKind::Ai => (ai0(), aip0(), f, g),
        AiryKind::Bi => (bi0(), bip0(), f, g),
        AiryKind::AiPrime => (ai0(), aip0(), fp, gp),
        AiryKind::BiPrime => (bi0(), bip0(), fp, gp),
    };
    x.scale(a).add(y.scale(b)).to_c64()
}

/// `ζ = (2/3) z^{3/2}` on the principal branch.
fn zeta(z: C64) -> C64 {
    2.0 / 3.0 * z.powf(1.5)
}

/// Full asymptotic expansion of Ai or Ai' for `|arg z| ≤ 2π/3`, ledger
/// form `(mantissa, ledger, absolute bound on the mantissa, terms)`.
fn ai_asymptotic_ledger(deriv: bool, z: C64, rel_tol: f64) -> (C64, f64, f64, u32) {
    let zt = zeta(z);
    let zc = CoverPoint::from_polar(zt.norm(), 1.5 * z.arg()).expect("nonzero");
    let nu = C64::new(if deriv { 2.0 / 3.0 } else { 1.0 / 3.0 }, 0.0);
    let (sum, n, b) = optimal_sum(nu, zt, false, |n| k_remainder_bound(n, nu, &zc), rel_tol);
    let quarter = z.powf(0.25);
    let pre = if deriv { -quarter / (2.0 * PI.sqrt()) } else { 1.0 / (2.0 * PI.sqrt() * quarter) };
    let mant = pre * C64::from_polar(1.0, -zt.im);
    (mant * sum, -zt.re, pre.norm() * b, n)
}

/// Asymptotic representation with certified bound (Ai or Ai' only,
/// `|arg z| ≤ 2π/3`).
pub fn airy_asymptotic(which: AiryKind, z: C64, tol: f64) -> Result<AsymptoticEval> {
    let deriv = match which {
        AiryKind::Ai => false,
        AiryKind::AiPrime => true,
        _ => return Err(Error::Domain("asymptotic form provided for Ai and Ai' only".into())),
    };
    if z.arg().abs() > 2.0 * PI / 3.0 + 1e-12 || z.norm() == 0.0 {
        return Err(Error::Domain("asymptotic form needs |arg z| ≤ 2π/3".into()));
    }
    let (m, l, b, n) = ai_asymptotic_ledger(deriv, z, tol);
    let s = l.exp();
    Ok(AsymptoticEval { value: m * s, n_terms: n as usize, remainder_bound: b * s })
}

/// `1 + 7√π Γ(7/12)/Γ(1/12)`.
fn r1_constant() -> f64 {
    1.0 + 7.0 * PI.sqrt() * (gamma(C64::new(7.0 / 12.0, 0.0)) / gamma(C64::new(1.0 / 12.0, 0.0))).re
}

/// Bound on `|R₁(z)|` in `Ai(z) = e^{−ζ}/(2√π z^{1/4})(1 + R₁(z))`.
pub fn r1_bound(z: C64) -> f64 {
    let th = z.arg().abs();
    let base = 5.0 / 72.0 / zeta(z).norm();
    let slack = 1e-12;
    let mut b: f64 = 0.0;
    if th <= PI / 3.0 + slack {
        b = b.max(base);
    }
    if th >= PI / 3.0 - slack && th <= 2.0 * PI / 3.0 + slack {
        b = b.max(base * (1.0 / (1.5 * th).sin()).abs().max(r1_constant()));
    }
    if th >= 2.0 * PI / 3.0 - slack {
        let c = (1.5 * th).cos().abs();
        b = b.max(base * (7.0 * PI).sqrt() / (3f64.sqrt() * c.powf(7.0 / 6.0)) * r1_constant());
    }
    b
}

/// Bound on `|P₁(z)|` in `Ai'(z) = −z^{1/4}e^{−ζ}/(2√π)(1 + P₁(z))`, with
/// leading constant `|A₁(2/3)| = 7/72`.
pub fn p1_bound(z: C64) -> f64 {
    let th = z.arg().abs();
    let base = 7.0 / 72.0 / zeta(z).norm();
    let slack = 1e-12;
    let mut b: f64 = 0.0;
    if th <= PI / 3.0 + slack {
        b = b.max(base);
    }
    if th >= PI / 3.0 - slack && th <= 2.0 * PI / 3.0 + slack {
        b = b.max(base * (1.0 / (1.5 * th).sin()).abs().max(1.0 + PI / 2.0));
    }
    if th >= 2.0 * PI / 3.0 - slack {
        let c = (1.5 * th).cos().abs();
        b = b.max(base * ((2.0 * PI).sqrt() / c + PI / 2.0 + 1.0));
    }
    b
}

/// The `P₁` bound with the printed leading constant 5/72.  It fails for
/// real `z` (there `P₁ ≈ (7/72)/ζ`); kept for reference.
pub fn p1_bound_stated(z: C64) -> f64 {
    let th = z.arg().abs();
    let base = 5.0 / 72.0 / zeta(z).norm();
    let slack = 1e-12;
    let mut b: f64 = 0.0;
    if th <= PI / 3.0 + slack {
        b = b.max(base);
    }
    if th >= PI / 3.0 - slack && th <= 2.0 * PI / 3.0 + slack {
        b = b.max(base * (1.0 / (1.5 * th).sin()).abs().max(1.0 + PI / 2.0));
    }
    if th >= 2.0 * PI / 3.0 - slack {
        let c = (1.5 * th).cos().abs();
        b = b.max(base * ((2.0 * PI).sqrt() / c + PI / 2.0 + 1.0));
    }
    b
}

/// One-term representations with the `R₁`/`P₁` bounds: Ai, Ai' for
/// `|arg z| < π`; Bi, Bi' for `|arg z| < π/3`.
pub fn airy_one_term(which: AiryKind, z: C64) -> Result<AsymptoticEval> {
    if z.norm() == 0.0 {
        return Err(Error::Domain("one-term form needs z ≠ 0".into()));
    }
    let th = z.arg().abs();
    let zt = zeta(z);
    let q = z.powf(0.25);
    let sp = PI.sqrt();
    let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let (v, b) = match which {
        AiryKind::Ai => {
            if th >= PI {
                return Err(Error::Domain("Ai one-term form needs |arg z| < π".into()));
            }
            let v = (-zt).exp() / (2.0 * sp * q);
            (v, v.norm() * r1_bound(z))
        }
        AiryKind::AiPrime => {
            if th >= PI {
                return Err(Error::Domain("Ai' one-term form needs |arg z| < π".into()));
            }
            let v = -q * (-zt).exp() / (2.0 * sp);
            (v, v.norm() * p1_bound(z))
        }
        AiryKind::Bi => {
            if th >= PI / 3.0 {
                return Err(Error::Domain("Bi one-term form needs |arg z| < π/3".into()));
            }
            let v = zt.exp() / (sp * q);
            (v, v.norm() * (r1_bound(z * w.conj()) + r1_bound(z * w)) / 2.0)
        }
        AiryKind::BiPrime => {
            if th >= PI / 3.0 {
                return Err(Error::Domain("Bi' one-term form needs |arg z| < π/3".into()));
            }
            let v = q * zt.exp() / sp;
            (v, v.norm() * (p1_bound(z * w.conj()) + p1_bound(z * w)) / 2.0)
        }
    };
    Ok(AsymptoticEval { value: v, n_terms: 1, remainder_bound: b })
}

/// Ai or Ai' in ledger form for `|z| > 10`.
fn ai_large_ledger(deriv: bool, z: C64, tol: f64) -> (C64, f64) {
    let th = z.arg();
    if th.abs() <= 2.0 * PI / 3.0 {
        let (m, l, _, _) = ai_asymptotic_ledger(deriv, z, tol);
        return (m, l);
    }
    let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let w2 = w * w;
    // reduce both rotated points to principal arguments
    let p1 = C64::from_polar(z.norm(), wrap(th + 2.0 * PI / 3.0));
    let p2 = C64::from_polar(z.norm(), wrap(th + 4.0 * PI / 3.0));
    let (a1, l1, _, _) = ai_asymptotic_ledger(deriv, p1, tol);
    let (a2, l2, _, _) = ai_asymptotic_ledger(deriv, p2, tol);
    let (c1, c2) = if deriv { (-w2, -w) } else { (-w, -w2) };
    ledger_add(c1 * a1, l1, c2 * a2, l2)
}

fn wrap(a: f64) -> f64 {
    let mut a = a;
    while a > PI {
        a -= 2.0 * PI;
    }
    while a <= -PI {
        a += 2.0 * PI;
    }
    a
}

/// Airy function value as `(mantissa, ledger)` with value `= m·e^{ledger}`.
pub fn airy_ledger(which: AiryKind, z: C64, tol: f64) -> Result<(C64, f64)> {
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("non-finite Airy argument".into()));
    }
    if z.norm() <= MACLAURIN_RADIUS {
        return Ok((maclaurin(which, z), 0.0));
    }
    match which {
        AiryKind::Ai => Ok(ai_large_ledger(false, z, tol)),
        AiryKind::AiPrime => Ok(ai_large_ledger(true, z, tol)),
        AiryKind::Bi | AiryKind::BiPrime => {
            let deriv = which == AiryKind::BiPrime;
            let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
            let th = z.arg();
            let za = C64::from_polar(z.norm(), wrap(th + 2.0 * PI / 3.0));
            let zb = C64::from_polar(z.norm(), wrap(th - 2.0 * PI / 3.0));
            let (a, la) = ai_large_ledger(deriv, za, tol);
            let (b, lb) = ai_large_ledger(deriv, zb, tol);
            let e = C64::from_polar(1.0, PI / 6.0);
            let (ca, cb) = if deriv { (e * w, e.conj() * w.conj()) } else { (e, e.conj()) };
            Ok(ledger_add(ca * a, la, cb * b, lb))
        }
    }
}

/// Airy function value.
pub fn airy(which: AiryKind, z: C64, tol: f64) -> Result<C64> {
    let (m, l) = airy_ledger(which, z, tol)?;
    Ok(m * l.exp())
}
