use proptest::prelude::*;
use specdet::determinants::q_det;
use specdet::roots::{density_integral, scan_and_refine};
use specdet::specfun::{airy, bessel_j, gamma, AiryKind};
use specdet::wkb::action;
use specdet::{Branch, CoverPoint, OscillatorParams, RescaledParams, C64};
use std::f64::consts::PI;

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cover_rotation_round_trip(r in 0.1f64..10.0, th in -6.0f64..6.0, m in -5i64..5, alpha in 1.0f64..20.0) {
        let z = CoverPoint::from_polar(r, th).unwrap();
        let w = z.rotate(m, alpha).rotate(-m, alpha);
        prop_assert!((w.arg - z.arg).abs() < 1e-12);
        prop_assert!((w.log_modulus - z.log_modulus).abs() < 1e-12);
        prop_assert!((z.rotate(m, alpha).arg - th - m as f64 * PI / (alpha + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn cover_power_laws(r in 0.1f64..10.0, th in -6.0f64..6.0, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let z = CoverPoint::from_polar(r, th).unwrap();
        let lhs = z.pow(a).pow(b);
        let rhs = z.pow(a * b);
        prop_assert!((lhs.arg - rhs.arg).abs() < 1e-12);
        prop_assert!(rel(z.pow(a).to_complex() * z.pow(b).to_complex(), z.pow(a + b).to_complex()) < 1e-12);
        prop_assert!(rel(z.mul(&z).to_complex(), z.to_complex() * z.to_complex()) < 1e-12);
    }

    #[test]
    fn gamma_reflection(x in -4.5f64..4.5, y in -3.0f64..3.0) {
        let z = C64::new(x, y);
        prop_assume!((z - z.re.round()).norm() > 1e-3);
        let lhs = gamma(z) * gamma(1.0 - z);
        let rhs = PI / (z * PI).sin();
        prop_assert!(rel(lhs, rhs) < 1e-12, "{lhs} vs {rhs}");
    }

    #[test]
    fn airy_wronskian(x in -12.0f64..12.0, y in -12.0f64..12.0) {
        let z = C64::new(x, y);
        let f = |k| airy(k, z, 1e-15).unwrap();
        let w = f(AiryKind::Ai) * f(AiryKind::BiPrime) - f(AiryKind::AiPrime) * f(AiryKind::Bi);
        let scale = (f(AiryKind::Ai) * f(AiryKind::BiPrime)).norm().max(1.0);
        prop_assert!((w - 1.0 / PI).norm() < 1e-12 * scale, "W = {w} at {z}");
    }

    #[test]
    fn bessel_three_term_recurrence(nu in 0.6f64..6.0, nui in -0.5f64..0.5, r in 0.2f64..40.0, th in -1.5f64..1.5) {
        let nu = C64::new(nu, nui);
        let z = CoverPoint::from_polar(r, th).unwrap();
        let j = |n: C64| bessel_j(n, z, 1e-15).unwrap();
        let lhs = j(nu - 1.0) + j(nu + 1.0);
        let rhs = 2.0 * nu / z.to_complex() * j(nu);
        let scale = j(nu - 1.0).norm().max(j(nu + 1.0).norm());
        prop_assert!((lhs - rhs).norm() < 1e-11 * scale, "{lhs} vs {rhs}");
    }

    #[test]
    fn density_integral_is_additive(a in 1.0f64..3.0, w1 in 0.0f64..2.0, w2 in 0.0f64..2.0, p in 0.2f64..3.0) {
        let (b, c) = (a + w1, a + w1 + w2);
        let whole = density_integral((a, c), p).unwrap();
        let parts = density_integral((a, b), p).unwrap() + density_integral((b, c), p).unwrap();
        prop_assert!((whole - parts).abs() < 1e-12 * whole.abs().max(1.0));
        prop_assert!(whole >= 0.0);
    }

    #[test]
    fn scan_finds_shifted_sine_zeros(s in 0.05f64..3.0, len in 4.0f64..30.0) {
        let f = move |x: f64| Ok((x + s).sin());
        let z = scan_and_refine(&f, (0.0, len), (12.0 * len) as usize + 2, 1e-13).unwrap();
        let want: Vec<f64> = (1..).map(|k| k as f64 * PI - s).skip_while(|&x| x < 0.0).take_while(|&x| x <= len).collect();
        prop_assert_eq!(z.len(), want.len());
        for (r, w) in z.iter().zip(&want) {
            prop_assert!((r.location - w).abs() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn action_branches_are_antisymmetric(alpha in 5.0f64..40.0, eps in 1.2f64..2.5, x in 0.2f64..1.0, th in -0.8f64..0.8) {
        let th = th * PI / (2.0 * alpha + 2.0);
        let rp = RescaledParams::new(alpha, C64::new(eps, 0.0), C64::new(1.0, 0.0)).unwrap();
        let x = CoverPoint::from_polar(x, th).unwrap();
        let plus = action(&rp, x, Branch::Plus, 1e-12).unwrap().value;
        let minus = action(&rp, x, Branch::Minus, 1e-12).unwrap().value;
        prop_assert!((plus + minus).norm() < 1e-10 * plus.norm().max(1.0), "{plus} vs {minus}");
    }

    #[test]
    fn determinant_schwarz_reflection(alpha in 1.5f64..6.0, er in -3.0f64..8.0, ei in 0.1f64..3.0, ell in 0.0f64..1.0) {
        let p = OscillatorParams::new(alpha, C64::new(er, ei), C64::new(ell, 0.0)).unwrap();
        let q = q_det(&p, Branch::Plus, 1e-10).unwrap().value;
        let qc = q_det(&p.with_energy(C64::new(er, -ei)), Branch::Plus, 1e-10).unwrap().value;
        prop_assert!(rel(qc, q.conj()) < 1e-7, "{q} vs {qc}");
    }
}
