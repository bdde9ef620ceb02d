//! Spectral determinants `Q± = W[ψ₀, χ±]`, Stokes multipliers
//! `σ_k = (−1)^k (α+1)/π · W[ψ_{k−1}, ψ_{k+1}]` and the residuals of the
//! TQ relation, the quantum Wronskian and the Bethe equations.

use crate::cover::CoverPoint;
use crate::error::{Error, Result};
use crate::frobenius::chi_at;
use crate::ode::SolutionSample;
use crate::oscillator::{Branch, OscillatorParams};
use crate::sibuya::{sibuya_at, sibuya_rotated};
use crate::C64;
use std::f64::consts::PI;

/// A spectral determinant value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeterminantValue {
    pub params: OscillatorParams,
    pub branch: Branch,
    pub value: C64,
    pub error_estimate: f64,
}

/// A Stokes multiplier value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesValue {
    pub params: OscillatorParams,
    pub k: i64,
    pub value: C64,
}

const SAME_POINT: f64 = 1e-12;

fn check_same_point(a: &SolutionSample, b: &SolutionSample) -> Result<()> {
    if (a.x.log_modulus - b.x.log_modulus).abs() > SAME_POINT || (a.x.arg - b.x.arg).abs() > SAME_POINT {
        return Err(Error::Geometry(format!(
            "Wronskian of samples at different points ({:?} vs {:?})",
            a.x, b.x
        )));
    }
    Ok(())
}

/// `W[a, b] = a·b' − a'·b` as `(mantissa, ledger)`.
pub fn wronskian_ledger(a: &SolutionSample, b: &SolutionSample) -> Result<(C64, f64)> {
    check_same_point(a, b)?;
    Ok((a.value * b.derivative - a.derivative * b.value, a.ledger + b.ledger))
}

/// `W[a, b] = a·b' − a'·b`.
pub fn wronskian(a: &SolutionSample, b: &SolutionSample) -> Result<C64> {
    let (m, l) = wronskian_ledger(a, b)?;
    Ok(m * l.exp())
}

/// `Q±` at matching point `xm`.
pub fn q_det_at(params: &OscillatorParams, branch: Branch, xm: CoverPoint, tol: f64) -> Result<DeterminantValue> {
    let psi = sibuya_at(params, 0, xm, tol)?;
    let chi = chi_at(params, branch, xm, tol)?;
    let (m, l) = wronskian_ledger(&psi, &chi)?;
    let scale = (psi.value.norm() * chi.derivative.norm() + psi.derivative.norm() * chi.value.norm()) * l.exp();
    Ok(DeterminantValue { params: *params, branch, value: m * l.exp(), error_estimate: 10.0 * tol * scale })
}

/// `Q± = W[ψ₀, χ±]` at `x = 1`.
pub fn q_det(params: &OscillatorParams, branch: Branch, tol: f64) -> Result<DeterminantValue> {
    q_det_at(params, branch, CoverPoint::real(1.0), tol)
}

/// `σ_k` for `|k| ≤ 1`, evaluated at `|x| = 1` on the bisecting ray.
pub fn stokes(params: &OscillatorParams, k: i64, tol: f64) -> Result<StokesValue> {
    if k.abs() > 1 {
        return Err(Error::Domain(format!("Stokes multiplier index {k} not supported (|k| <= 1)")));
    }
    let x = CoverPoint::new(0.0, k as f64 * PI / (params.alpha + 1.0));
    let a = sibuya_rotated(params, k - 1, x, tol)?;
    let b = sibuya_rotated(params, k + 1, x, tol)?;
    let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let value = sign * (params.alpha + 1.0) / PI * wronskian(&a, &b)?;
    Ok(StokesValue { params: *params, k, value })
}

/// Unit phase `e^{iθ}`.
fn phase(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Residual of the TQ relation
/// `iσ₀Q(E) + e^{−iπβ}Q(Ee^{−2πi/(α+1)}) + e^{iπβ}Q(Ee^{2πi/(α+1)})`,
/// with `β = ±(ℓ+1/2)/(α+1)` for `Q±`, together with the scale `Σ|terms|`.
pub fn tq_residual(params: &OscillatorParams, branch: Branch, tol: f64) -> Result<(C64, f64)> {
    let a1 = params.alpha + 1.0;
    let beta = branch.sign() * params.beta();
    let sigma = stokes(params, 0, tol)?.value;
    let q = q_det(params, branch, tol)?.value;
    let qm = q_det(&params.with_energy(params.e * phase(-2.0 * PI / a1)), branch, tol)?.value;
    let qp = q_det(&params.with_energy(params.e * phase(2.0 * PI / a1)), branch, tol)?.value;
    let ib = C64::new(0.0, PI) * beta;
    let t = [C64::new(0.0, 1.0) * sigma * q, (-ib).exp() * qm, ib.exp() * qp];
    let scale = t.iter().map(|z| z.norm()).sum();
    Ok((t[0] + t[1] + t[2], scale))
}

/// Residual of the quantum Wronskian
/// `e^{iπβ}Q₊(Eω)Q₋(Eω⁻¹) − e^{−iπβ}Q₋(Eω)Q₊(Eω⁻¹) − 2i sin(πβ)`,
/// `ω = e^{iπ/(α+1)}`, together with the scale `Σ|terms|`.
pub fn quantum_wronskian_residual(params: &OscillatorParams, tol: f64) -> Result<(C64, f64)> {
    let a1 = params.alpha + 1.0;
    let beta = params.beta();
    let up = params.with_energy(params.e * phase(PI / a1));
    let dn = params.with_energy(params.e * phase(-PI / a1));
    let qp_up = q_det(&up, Branch::Plus, tol)?.value;
    let qm_dn = q_det(&dn, Branch::Minus, tol)?.value;
    let qm_up = q_det(&up, Branch::Minus, tol)?.value;
    let qp_dn = q_det(&dn, Branch::Plus, tol)?.value;
    let ib = C64::new(0.0, PI) * beta;
    let t = [ib.exp() * qp_up * qm_dn, (-ib).exp() * qm_up * qp_dn, 2.0 * C64::new(0.0, 1.0) * (PI * beta).sin()];
    let scale = t.iter().map(|z| z.norm()).sum();
    Ok((t[0] - t[1] - t[2], scale))
}

/// Bethe residual `e^{4iπp} Q₊(Ee^{2iπ/(α+1)})/Q₊(Ee^{−2iπ/(α+1)}) + 1` at a
/// zero `E` of `Q₊`, with `p = (ℓ+1/2)/(2α+2)`.
pub fn bethe_residual(params_at_zero: &OscillatorParams, tol: f64) -> Result<C64> {
    let p = params_at_zero;
    let a1 = p.alpha + 1.0;
    let q0 = q_det(p, Branch::Plus, tol)?;
    let qp = q_det(&p.with_energy(p.e * phase(2.0 * PI / a1)), Branch::Plus, tol)?.value;
    let qm = q_det(&p.with_energy(p.e * phase(-2.0 * PI / a1)), Branch::Plus, tol)?.value;
    if q0.value.norm() > tol.sqrt() * qp.norm().max(qm.norm()) {
        return Err(Error::Domain(format!("E = {} is not a certified zero of Q+ (|Q+| = {})", p.e, q0.value.norm())));
    }
    let pp = (p.ell + 0.5) / (2.0 * a1);
    Ok((C64::new(0.0, 4.0 * PI) * pp).exp() * qp / qm + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    #[test]
    fn wronskian_basics() {
        let x = CoverPoint::real(1.0);
        let a = SolutionSample::new(x, C64::new(0.3, 0.1), C64::new(-1.0, 0.2), 0.5);
        let b = SolutionSample::new(x, C64::new(1.1, 0.0), C64::new(0.4, -0.3), -2.0);
        assert_eq!(wronskian(&a, &a).unwrap(), c(0.0));
        assert!((wronskian(&a, &b).unwrap() + wronskian(&b, &a).unwrap()).norm() < 1e-15);
        let far = SolutionSample { x: CoverPoint::real(2.0), ..b };
        assert!(wronskian(&a, &far).is_err());
    }

    #[test]
    fn frobenius_wronskian_through_samples() {
        let p = OscillatorParams::real(3.0, 1.0, 0.2).unwrap();
        let x = CoverPoint::real(1.0);
        let a = chi_at(&p, Branch::Minus, x, 1e-12).unwrap();
        let b = chi_at(&p, Branch::Plus, x, 1e-12).unwrap();
        let want = 8.0 / PI * (PI * 0.7 / 4.0).sin();
        assert!((wronskian(&a, &b).unwrap() - want).norm() < 1e-10);
    }

    #[test]
    fn q_plus_is_real_for_real_data() {
        let p = OscillatorParams::real(4.0, 2.5, 0.3).unwrap();
        let q = q_det(&p, Branch::Plus, 1e-9).unwrap();
        assert!(q.value.im.abs() < q.error_estimate, "{:?}", q);
    }

    #[test]
    fn large_degree_value_at_zero_energy() {
        let p = OscillatorParams::real(64.0, 0.0, 0.0).unwrap();
        let q = q_det(&p, Branch::Plus, 1e-9).unwrap();
        assert!((q.value - 1.0).norm() < 0.1, "{}", q.value);
    }

    #[test]
    fn matching_point_independence() {
        let p = OscillatorParams::new(5.0, C64::new(1.0, 1.0), c(0.4)).unwrap();
        for branch in [Branch::Plus, Branch::Minus] {
            let a = q_det(&p, branch, 1e-10).unwrap();
            let b = q_det_at(&p, branch, CoverPoint::real(0.8), 1e-10).unwrap();
            assert!((a.value - b.value).norm() < a.error_estimate + b.error_estimate, "{a:?} {b:?}");
        }
    }

    #[test]
    fn tq_relation() {
        for (alpha, e, ell) in [(3.0, c(1.0), c(0.2)), (8.0, c(-2.0), c(0.7)), (5.0, C64::new(1.0, 1.0), c(0.4))] {
            let p = OscillatorParams::new(alpha, e, ell).unwrap();
            for branch in [Branch::Plus, Branch::Minus] {
                let (r, s) = tq_residual(&p, branch, 1e-9).unwrap();
                assert!(r.norm() < 1e-7 * s, "{alpha} {branch:?} {r} {s}");
            }
        }
    }

    #[test]
    fn quantum_wronskian() {
        for (alpha, e, ell) in [(3.0, c(0.0), c(0.2)), (5.0, C64::new(1.0, 1.0), c(0.4)), (8.0, c(-2.0), c(0.7))] {
            let p = OscillatorParams::new(alpha, e, ell).unwrap();
            let (r, s) = quantum_wronskian_residual(&p, 1e-9).unwrap();
            assert!(r.norm() < 1e-7 * s, "{alpha} {r} {s}");
        }
    }

    #[test]
    fn stokes_limit_at_large_degree() {
        let p = OscillatorParams::real(64.0, 2.0, 0.3).unwrap();
        let s = stokes(&p, 0, 1e-9).unwrap().value;
        // σ₀ → 2i under the normalization of ψ_{±1} (see tq_at_zero_energy)
        assert!((s / C64::new(0.0, 2.0) - 1.0).norm() < 0.15, "{s}");
    }

    #[test]
    fn tq_at_zero_energy() {
        let p = OscillatorParams::real(3.0, 0.0, 0.2).unwrap();
        let s = stokes(&p, 0, 1e-10).unwrap().value;
        // TQ at E = 0: iσ₀(0) = −2cos(πβ)
        let want = -2.0 * (PI * p.beta()).cos();
        assert!((C64::new(0.0, 1.0) * s - want).norm() < 1e-8, "{s}");
    }
}
