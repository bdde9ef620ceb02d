//! Sibuya's subdominant solutions `ψ_k`.
//!
//! `ψ₀` is anchored at a far point on the positive axis to the modified
//! Bessel reference solution `Ψ₀`, corrected by the WKB factor
//! `(x^{2α}/V)^{1/4} exp(∫_x^∞ (√V − t^α) dt)`, and integrated inward.
//! `ψ_k` for `k ≠ 0` comes from the rotation identity
//! `ψ_k(x; E) = e^{−ikπ/2} e^{ikπ/(2α+2)} ψ₀(x e^{−ikπ/(α+1)}; E e^{2ikπ/(α+1)})`.

use crate::cover::CoverPoint;
use crate::error::{Error, Result};
pub use crate::ode::SolutionSample;
use crate::ode::{integrate_path, integrate_riccati_rel, LogSample, Segment};
use crate::oscillator::{potential, OscillatorParams};
use crate::specfun::modified::{k_remainder_bound, optimal_sum};
use crate::specfun::{ledger_add, mod_bessel_k_ledger};
use crate::C64;
use std::f64::consts::PI;

/// The reference solution `Ψ_k` of `ψ'' = x^{2α}ψ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceSolution {
    pub k: i64,
    pub alpha: f64,
}

impl ReferenceSolution {
    pub fn eval(&self, x: CoverPoint, tol: f64) -> Result<SolutionSample> {
        psi_reference(self.k, self.alpha, x, tol)
    }
}

/// `Ψ_k(x) = e^{−ikπ/2} x^{1/2} K_ν(ζ)/(α+1)`, `ν = 1/(2α+2)`,
/// `ζ = x^{α+1}e^{−ikπ}/(α+1)`, with its derivative
/// `e^{−ikπ/2} x^{−1/2} (K_ν(ζ) − (α+1)ζK_{ν+1}(ζ))/(α+1)`.
pub fn psi_reference(k: i64, alpha: f64, x: CoverPoint, tol: f64) -> Result<SolutionSample> {
    let a1 = alpha + 1.0;
    let nu = C64::new(1.0 / (2.0 * a1), 0.0);
    let zeta = CoverPoint::new(a1 * x.log_modulus - a1.ln(), a1 * x.arg - k as f64 * PI);
    let tol = tol.min(1e-13);
    let (k0, l0) = mod_bessel_k_ledger(nu, zeta, tol)?;
    let (k1, l1) = mod_bessel_k_ledger(nu + 1.0, zeta, tol)?;
    let zphase = C64::from_polar(a1, zeta.arg);
    let (dm, dl) = ledger_add(k0, l0, -zphase * k1, l1 + zeta.log_modulus);
    let pre = C64::from_polar(1.0 / a1, -(k as f64) * PI / 2.0);
    let half = C64::from_polar(1.0, 0.5 * x.arg);
    let value = pre * half * k0;
    let deriv = pre * half.conj() * dm;
    // common ledger: value carries x^{1/2}, derivative x^{−1/2}
    let lv = l0 + 0.5 * x.log_modulus;
    let ld = dl - 0.5 * x.log_modulus;
    let l = lv.max(ld);
    Ok(SolutionSample::new(x, value * (lv - l).exp(), deriv * (ld - l).exp(), l))
}

/// `(I(x), u(x))` with `I(x) = ∫_x^∞ (√V − t^α) dt` from the binomial
/// series in `u = ℓ(ℓ+1)t^{−2α−2} − E t^{−2α}`, for real `x > 0`.
fn wkb_tail(alpha: f64, a: C64, e: C64, x: f64) -> (C64, C64, C64) {
    let big_a = a * x.powf(-2.0 * alpha - 2.0);
    let big_b = -e * x.powf(-2.0 * alpha);
    let u = big_a + big_b;
    let mut total = C64::default();
    let mut cn = 0.5;
    let mag = big_a.norm() + big_b.norm();
    for n in 1..400usize {
        // Σ_i C(n,i) A^i B^{n−i}/(2αn + 2i − α − 1)
        let mut inner = C64::default();
        let mut binom = 1.0;
        let mut ai = C64::new(1.0, 0.0);
        let bpow: Vec<C64> = std::iter::successors(Some(C64::new(1.0, 0.0)), |p| Some(p * big_b)).take(n + 1).collect();
        for i in 0..=n {
            let den = 2.0 * alpha * n as f64 + 2.0 * i as f64 - alpha - 1.0;
            inner += binom * ai * bpow[n - i] / den;
            binom = binom * (n - i) as f64 / (i + 1) as f64;
            ai *= big_a;
        }
        let term = cn * inner;
        total += term;
        if (cn.abs() * mag.powi(n as i32)) < 1e-17 * total.norm().max(1e-300) {
            break;
        }
        cn *= (0.5 - n as f64) / (n + 1) as f64;
    }
    (total * x.powf(alpha + 1.0), u, big_a)
}

fn perturbation_error(alpha: f64, a: C64, e: C64, r: f64) -> f64 {
    alpha * (e.norm() + a.norm() * r.powi(-2)) * r.powf(-3.0 * alpha - 1.0)
}

/// Far anchor radius on the positive axis.  For `α > 1` the smallest
/// `R ≥ 1` with WKB-corrected anchor error below `tol/10` and `|u(R)| ≤ 1/2`;
/// for `α ≤ 1`, `R^{2α} ≥ 10(|E| + |ℓ(ℓ+1)|)` and `R^{α+1}/(α+1)` large
/// enough that the dominant admixture decays below `tol`.
pub fn far_anchor(params: &OscillatorParams, tol: f64) -> CoverPoint {
    let alpha = params.alpha;
    let a = params.centrifugal();
    let e = params.e;
    let mut r: f64 = 1.0;
    if alpha > 1.0 {
        let u = |r: f64| (a * r.powf(-2.0 * alpha - 2.0) - e * r.powf(-2.0 * alpha)).norm();
        while perturbation_error(alpha, a, e, r) > 0.1 * tol || u(r) > 0.5 {
            r *= 1.005;
        }
    } else {
        let need = 0.5 * (1.0 / tol).ln() + 3.0;
        while r.powf(2.0 * alpha) < 10.0 * (e.norm() + a.norm()) || r.powf(alpha + 1.0) / (alpha + 1.0) < need {
            r *= 1.005;
        }
    }
    CoverPoint::real(r)
}

/// Initial data for `ψ₀` at the real point `r`.
pub fn anchor_sample(params: &OscillatorParams, r: f64, tol: f64) -> Result<SolutionSample> {
    let x = CoverPoint::real(r);
    let base = psi_reference(0, params.alpha, x, tol)?;
    if params.alpha <= 1.0 {
        return Ok(base);
    }
    let alpha = params.alpha;
    let (i, u, big_a) = wkb_tail(alpha, params.centrifugal(), params.e, r);
    let s = (1.0 + u).sqrt();
    let logd = base.derivative / base.value + 0.25 * (2.0 * alpha - (2.0 * alpha - 2.0 * big_a) / (1.0 + u)) / r
        - r.powf(alpha) * u / (s + 1.0);
    let value = base.value * (1.0 + u).powf(-0.25) * C64::from_polar(1.0, i.im);
    Ok(SolutionSample::new(x, value, value * logd, base.ledger + i.re))
}

/// Anchor for `ψ₀` at real `r` relative to `g(x) = −x^{α+1}/(α+1)`, from
/// the K asymptotic series with `e^{−ζ}` factored out.  `None` where the
/// series does not reach full precision.
fn anchor_relative(params: &OscillatorParams, r: f64) -> Option<LogSample> {
    let alpha = params.alpha;
    let a1 = alpha + 1.0;
    let zeta = r.powf(a1) / a1;
    let z = CoverPoint::real(zeta);
    let zc = C64::new(zeta, 0.0);
    let nu = C64::new(1.0 / (2.0 * a1), 0.0);
    let sum = |nu: C64| {
        let (s, _, b) = optimal_sum(nu, zc, false, |n| k_remainder_bound(n, nu, &z), 1e-17);
        (b <= 1e-16 * s.norm()).then_some(s)
    };
    let s0 = sum(nu)?;
    let s1 = sum(nu + 1.0)?;
    // Ψ₀ = r^{1/2} √(π/2ζ) e^{−ζ} S_ν/(α+1), Ψ₀'/Ψ₀ = (1 − (α+1)ζ S_{ν+1}/S_ν)/r
    let base = (r.sqrt() / a1 * (PI / (2.0 * zeta)).sqrt()) * s0;
    let base_logd = (1.0 - a1 * zeta * s1 / s0) / r;
    let (i, u, big_a) = if alpha > 1.0 {
        wkb_tail(alpha, params.centrifugal(), params.e, r)
    } else {
        (C64::default(), C64::default(), C64::default())
    };
    let (corr, logd) = if alpha > 1.0 {
        let sq = (1.0 + u).sqrt();
        let logd = base_logd + 0.25 * (2.0 * alpha - (2.0 * alpha - 2.0 * big_a) / (1.0 + u)) / r
            - r.powf(alpha) * u / (sq + 1.0);
        ((1.0 + u).powf(-0.25), logd)
    } else {
        (C64::new(1.0, 0.0), base_logd)
    };
    Some(LogSample { x: CoverPoint::real(r), log_rel: (base * corr).ln() + i, y: logd })
}

/// `(g(x), g'(x))` with `g(x) = −x^{α+1}/(α+1)`.
fn leading_phase(alpha: f64, x: CoverPoint) -> (C64, C64) {
    let a1 = alpha + 1.0;
    let xa = x.cpow(C64::new(alpha, 0.0));
    (-xa * x.to_complex() / a1, -xa)
}

/// Path variant for [`sibuya_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SibuyaOptions {
    /// Multiplier on the anchor radius.
    pub anchor_scale: f64,
    /// Arc at the anchor radius first, then the ray inward.
    pub arc_first: bool,
}

impl Default for SibuyaOptions {
    fn default() -> Self {
        Self { anchor_scale: 1.0, arc_first: false }
    }
}

/// Smallest radius beyond which `x^{2α}` dominates the rest of `V` on the
/// central sector, so that `ψ₀` has no zeros there.
fn riccati_radius(params: &OscillatorParams) -> f64 {
    let a = params.centrifugal().norm();
    let e = params.e.norm();
    let mut r: f64 = 1.0;
    while r.powf(2.0 * params.alpha) < 4.0 * (e + a / (r * r)) {
        r *= 1.005;
    }
    r
}

/// `ψ₀` at `x` with explicit path options.
pub fn sibuya_with(params: &OscillatorParams, x: CoverPoint, tol: f64, opts: SibuyaOptions) -> Result<SolutionSample> {
    let a1 = params.alpha + 1.0;
    if !(x.arg.abs() < 3.0 * PI / (2.0 * a1)) {
        return Err(Error::Geometry(format!("arg x = {} outside the Stokes sector of psi_0", x.arg)));
    }
    let r = x.modulus();
    let big_r = (far_anchor(params, tol).modulus() * opts.anchor_scale).max(r);
    let rtol = tol / 10.0;
    let v = |z: CoverPoint| potential(params, z);
    let g = |z: CoverPoint| leading_phase(params.alpha, z);
    let mut log = match anchor_relative(params, big_r) {
        Some(l) => l,
        None => {
            let a = anchor_sample(params, big_r, tol)?;
            let y = a.derivative / a.value;
            LogSample { x: a.x, log_rel: a.value.ln() + a.ledger - g(a.x).0, y }
        }
    };
    let theta = if opts.arc_first {
        log = integrate_riccati_rel(&Segment::Arc { r: big_r, theta0: 0.0, theta1: x.arg }, log, &v, &g, rtol)?.0;
        x.arg
    } else {
        0.0
    };
    let r_s = riccati_radius(params).max(r);
    if big_r > r_s && theta.abs() * a1 < 0.4 * PI {
        log = integrate_riccati_rel(&Segment::Ray { theta, r0: big_r, r1: r_s }, log, &v, &g, rtol)?.0;
    }
    let cur = log.to_sample(&g);
    let path = [
        Segment::Ray { theta, r0: cur.x.modulus(), r1: r },
        Segment::Arc { r, theta0: theta, theta1: x.arg },
    ];
    let (mut out, _) = integrate_path(&path, cur, &v, rtol)?;
    out.x = x;
    Ok(out)
}

/// `ψ_k(x)`: `ψ₀` directly for `k = 0`, otherwise by rotation.
pub fn sibuya_at(params: &OscillatorParams, k: i64, x: CoverPoint, tol: f64) -> Result<SolutionSample> {
    if k == 0 {
        sibuya_with(params, x, tol, SibuyaOptions::default())
    } else {
        sibuya_rotated(params, k, x, tol)
    }
}

/// `ψ_m(x; E, ℓ)` from `ψ₀` at `(x e^{−imπ/(α+1)}, E e^{2imπ/(α+1)})`.
pub fn sibuya_rotated(params: &OscillatorParams, m: i64, x: CoverPoint, tol: f64) -> Result<SolutionSample> {
    let a1 = params.alpha + 1.0;
    let mf = m as f64;
    let xr = x.rotate(-m, params.alpha);
    let pr = params.with_energy(params.e * C64::from_polar(1.0, 2.0 * mf * PI / a1));
    let base = sibuya_with(&pr, xr, tol, SibuyaOptions::default())?;
    let c = C64::from_polar(1.0, -mf * PI / 2.0 + mf * PI / (2.0 * a1));
    let d = C64::from_polar(1.0, -mf * PI / a1);
    Ok(SolutionSample { x, value: c * base.value, derivative: c * d * base.derivative, ledger: base.ledger })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(a: &SolutionSample, b: &SolutionSample) -> C64 {
        (a.value * b.derivative - a.derivative * b.value) * (a.ledger + b.ledger).exp()
    }

    #[test]
    fn reference_is_positive_on_the_axis() {
        for x in [0.3, 1.0, 2.5] {
            let s = psi_reference(0, 3.0, CoverPoint::real(x), 1e-12).unwrap();
            assert!(s.value.re > 0.0 && s.value.im.abs() < 1e-14 * s.value.re);
            assert!(s.derivative.re < 0.0);
        }
    }

    #[test]
    fn reference_normalization_residual() {
        // x^{α+1}/(α+1) = 30: residual ≈ (4ν² − 1)/(8ζ)
        let alpha: f64 = 4.0;
        let x = (30.0 * (alpha + 1.0)).powf(1.0 / (alpha + 1.0));
        let s = psi_reference(0, alpha, CoverPoint::real(x), 1e-13).unwrap();
        let nu = 1.0 / (2.0 * alpha + 2.0);
        let norm = ((2.0 * alpha + 2.0) / PI).sqrt() * x.powf(alpha / 2.0);
        let r = norm * (s.value * (s.ledger + 30.0).exp()).re - 1.0;
        let mu = 4.0 * nu * nu;
        let z8 = 240.0;
        let three = (mu - 1.0) / z8 + (mu - 1.0) * (mu - 9.0) / (2.0 * z8 * z8) + (mu - 1.0) * (mu - 9.0) * (mu - 25.0) / (6.0 * z8 * z8 * z8);
        assert!((r - three).abs() < 3e-7, "{r} {three}");
    }

    #[test]
    fn reference_solves_the_pure_power_equation() {
        let alpha = 4.0;
        let h = 1e-4;
        let d = |r: f64| psi_reference(0, alpha, CoverPoint::real(r), 1e-14).unwrap();
        let mid = d(1.5);
        let second = (d(1.5 + h).physical_derivative() - d(1.5 - h).physical_derivative()) / (2.0 * h);
        let res = second - 1.5f64.powf(2.0 * alpha) * mid.physical_value();
        assert!(res.norm() < 1e-6 * second.norm(), "{res}");
    }

    #[test]
    fn reference_wronskian() {
        let alpha = 3.0;
        let x = CoverPoint::from_polar(1.2, 0.1).unwrap();
        let a = psi_reference(0, alpha, x, 1e-13).unwrap();
        let b = psi_reference(1, alpha, x, 1e-13).unwrap();
        assert!((w(&a, &b) - PI / (alpha + 1.0)).norm() < 1e-12);
    }

    #[test]
    fn anchor_examples() {
        let p = OscillatorParams::real(50.0, 0.0, 0.0).unwrap();
        assert_eq!(far_anchor(&p, 1e-9).modulus(), 1.0);
        let p = OscillatorParams::real(3.0, 2.0, 0.5).unwrap();
        let r = far_anchor(&p, 1e-9).modulus();
        assert!(perturbation_error(3.0, p.centrifugal(), p.e, r) <= 1e-10);
    }

    #[test]
    fn wkb_tail_matches_quadrature() {
        let (alpha, a, e, x) = (3.0, C64::new(0.6, 0.0), C64::new(2.0, 0.5), 2.0);
        let (i, _, _) = wkb_tail(alpha, a, e, x);
        // mpmath quad of t^α u/(√(1+u)+1) on [2, ∞)
        let q = C64::new(-0.12051441022586296585, -0.031366162270340505540);
        assert!((i - q).norm() < 1e-8, "{i} {q}");
    }

    #[test]
    fn wronskian_between_neighbours() {
        let p = OscillatorParams::real(3.0, 1.7, 0.2).unwrap();
        let x = CoverPoint::real(1.0);
        let a = sibuya_at(&p, 0, x, 1e-10).unwrap();
        let b = sibuya_at(&p, 1, x, 1e-10).unwrap();
        assert!((w(&a, &b) - PI / 4.0).norm() < 1e-8, "{}", w(&a, &b));
    }

    #[test]
    fn large_degree_data_at_one() {
        let p = OscillatorParams::real(64.0, 4.0, 0.0).unwrap();
        let s = sibuya_at(&p, 0, CoverPoint::real(1.0), 1e-9).unwrap();
        assert!(s.physical_value().norm() < 0.2);
        assert!((s.physical_derivative() + 1.0).norm() < 0.15);
    }

    #[test]
    fn anchor_and_path_independence() {
        let tol = 1e-9;
        let p = OscillatorParams::new(3.0, C64::new(2.0, 0.5), C64::new(0.3, 0.0)).unwrap();
        let x = CoverPoint::from_polar(1.0, 0.2).unwrap();
        let a = sibuya_with(&p, x, tol, SibuyaOptions::default()).unwrap();
        let b = sibuya_with(&p, x, tol, SibuyaOptions { anchor_scale: 2.0, arc_first: false }).unwrap();
        let c = sibuya_with(&p, x, tol, SibuyaOptions { anchor_scale: 1.0, arc_first: true }).unwrap();
        let s = a.physical_value().norm().max(a.physical_derivative().norm());
        for o in [b, c] {
            assert!((o.physical_value() - a.physical_value()).norm() < 4.0 * tol * s);
            assert!((o.physical_derivative() - a.physical_derivative()).norm() < 4.0 * tol * s);
        }
    }

    #[test]
    fn rotation_zero_is_identity() {
        let p = OscillatorParams::real(3.0, 1.0, 0.2).unwrap();
        let x = CoverPoint::real(0.9);
        assert_eq!(sibuya_rotated(&p, 0, x, 1e-9).unwrap(), sibuya_at(&p, 0, x, 1e-9).unwrap());
    }

    #[test]
    fn neighbours_agree_deep_in_the_central_sector() {
        let alpha = 3.0;
        let p = OscillatorParams::real(alpha, 1.0, 0.2).unwrap();
        let x = CoverPoint::real((25.0 * (alpha + 1.0)).powf(1.0 / (alpha + 1.0)));
        let a = sibuya_at(&p, -1, x, 1e-10).unwrap();
        let b = sibuya_at(&p, 1, x, 1e-10).unwrap();
        let r = a.value / b.value * (a.ledger - b.ledger).exp();
        assert!((r - 1.0).norm() < 1e-6, "{r}");
    }
}
