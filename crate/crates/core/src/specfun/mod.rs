//! Special functions: Γ, Bessel J/Y/H, modified Bessel I/K, Airy, zeros.
//!
//! Arguments of the Bessel families are [`CoverPoint`]s, so every branch of
//! `z^ν` on the universal cover is addressable.  Power series are summed in
//! complex double-double arithmetic, which keeps full double accuracy in the
//! moderate-|z| band where the terms cancel.

pub mod airy;
pub mod bessel;
pub mod dd;
pub mod gamma;
pub mod modified;
pub mod zeros;

pub use airy::{airy, airy_asymptotic, airy_ledger, airy_maclaurin, airy_one_term, AiryKind};
pub use bessel::{bessel_j, bessel_y, hankel, hankel_asymptotic};
pub use gamma::{gamma, lgamma, rgamma};
pub use modified::{
    asymptotic_coeff, mod_bessel_i, mod_bessel_i_asymptotic, mod_bessel_i_ledger, mod_bessel_k,
    mod_bessel_i_series, mod_bessel_k_asymptotic, mod_bessel_k_ledger, mod_bessel_k_reference,
};
pub use zeros::{airy_negative_zeros, jnu_positive_zeros};


use crate::C64;
use std::f64::consts::PI;

/// Result of a truncated power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEval {
    pub value: C64,
    pub terms_used: usize,
    /// Estimated relative size of the neglected tail.
    pub tail_estimate: f64,
}

/// Result of a truncated asymptotic representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticEval {
    pub value: C64,
    pub n_terms: usize,
    /// Absolute bound on `|exact − value|` from the remainder inequalities.
    pub remainder_bound: f64,
}

/// `sin(mθ)/sin θ` with `cos θ = c`, i.e. the Chebyshev polynomial
/// `U_{m−1}(c)`, extended to negative `m` by oddness.
pub fn sin_ratio(m: i64, c: C64) -> C64 {
    if m == 0 {
        return C64::new(0.0, 0.0);
    }
    let n = m.unsigned_abs();
    let mut u_prev = C64::new(0.0, 0.0);
    let mut u = C64::new(1.0, 0.0);
    for _ in 1..n {
        let next = 2.0 * c * u - u_prev;
        u_prev = u;
        u = next;
    }
    if m < 0 {
        -u
    } else {
        u
    }
}

/// `cos(νπ)` for complex ν.
pub(crate) fn cos_pi(nu: C64) -> C64 {
    (nu * PI).cos()
}

/// Adds two ledger-scaled numbers `a·e^{la} + b·e^{lb}`.
pub fn ledger_add(a: C64, la: f64, b: C64, lb: f64) -> (C64, f64) {
    if a == C64::new(0.0, 0.0) {
        return (b, lb);
    }
    if b == C64::new(0.0, 0.0) {
        return (a, la);
    }
    let l = la.max(lb);
    (a * (la - l).exp() + b * (lb - l).exp(), l)
}

/// `e^{w}` split into a unit-modulus-scaled mantissa and a ledger.
pub(crate) fn exp_ledger(w: C64) -> (C64, f64) {
    (C64::from_polar(1.0, w.im), w.re)
}
