//! Points on the universal cover of the punctured plane.
//!
//! A point is stored as `(ln|z|, arg z)` with the argument unwound, so that
//! `x^{2α}` for large α never overflows and distinct sheets stay distinct.

use crate::error::{Error, Result};
use crate::C64;
use std::f64::consts::PI;

/// A point `e^{log_modulus + i·arg}` on the universal cover of ℂ*.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverPoint {
    pub log_modulus: f64,
    pub arg: f64,
}

impl CoverPoint {
    /// Builds a point from its raw coordinates.
    pub fn new(log_modulus: f64, arg: f64) -> Self {
        Self { log_modulus, arg }
    }

    /// `r e^{iθ}` with `r > 0`.
    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() || !theta.is_finite() {
            return Err(Error::Domain(format!("cover point needs r > 0, got r = {r}")));
        }
        Ok(Self { log_modulus: r.ln(), arg: theta })
    }

    /// The point on the principal sheet above a nonzero complex number.
    pub fn from_complex(z: C64) -> Result<Self> {
        Self::from_polar(z.norm(), z.arg())
    }

    /// Positive real point `r`.
    pub fn real(r: f64) -> Self {
        Self { log_modulus: r.ln(), arg: 0.0 }
    }

    pub fn modulus(&self) -> f64 {
        self.log_modulus.exp()
    }

    /// Projection to ℂ*.
    pub fn to_complex(&self) -> C64 {
        C64::from_polar(self.log_modulus.exp(), self.arg)
    }

    /// Complex logarithm on this sheet.
    pub fn ln(&self) -> C64 {
        C64::new(self.log_modulus, self.arg)
    }

    /// Real power: `(a·ln|z|, a·arg)`.
    pub fn pow(&self, a: f64) -> Self {
        Self { log_modulus: a * self.log_modulus, arg: a * self.arg }
    }

    /// Complex power projected to ℂ, `exp(a·ln z)` with the unwound argument.
    pub fn cpow(&self, a: C64) -> C64 {
        (a * self.ln()).exp()
    }

    /// Product on the cover (arguments add without reduction).
    pub fn mul(&self, other: &Self) -> Self {
        Self { log_modulus: self.log_modulus + other.log_modulus, arg: self.arg + other.arg }
    }

    /// Multiplication by a positive real scale.
    pub fn scale(&self, s: f64) -> Self {
        Self { log_modulus: self.log_modulus + s.ln(), arg: self.arg }
    }

    /// Rotation by `e^{i·phi}` on the cover.
    pub fn rotate_by(&self, phi: f64) -> Self {
        Self { log_modulus: self.log_modulus, arg: self.arg + phi }
    }

    /// Rotation by `e^{imπ/(α+1)}`.
    pub fn rotate(&self, m: i64, alpha: f64) -> Self {
        self.rotate_by(m as f64 * PI / (alpha + 1.0))
    }

    /// Representative with argument in `(−π, π]` and the number of half
    /// turns `m` removed, so that `self = principal · e^{imπ}`.
    pub fn principal_half_turns(&self) -> (Self, i64) {
        let m = ((self.arg - PI) / (2.0 * PI)).ceil() as i64 * 2;
        let mut arg = self.arg - m as f64 * PI;
        let mut m = m;
        if arg <= -PI {
            arg += 2.0 * PI;
            m -= 2;
        }
        (Self { log_modulus: self.log_modulus, arg }, m)
    }

    /// Representative with argument in `(−π/2, π/2]` and the number of half
    /// turns `m` removed, so that `self = reduced · e^{imπ}`.
    pub fn right_half_plane(&self) -> (Self, i64) {
        let m = ((self.arg - PI / 2.0) / PI).ceil() as i64;
        let arg = self.arg - m as f64 * PI;
        (Self { log_modulus: self.log_modulus, arg }, m)
    }
}

/// `cover_from_polar`: same as [`CoverPoint::from_polar`].
pub fn cover_from_polar(r: f64, theta: f64) -> Result<CoverPoint> {
    CoverPoint::from_polar(r, theta)
}

/// `cover_pow`: same as [`CoverPoint::pow`].
pub fn cover_pow(z: CoverPoint, a: f64) -> CoverPoint {
    z.pow(a)
}

/// `cover_rotate`: same as [`CoverPoint::rotate`].
pub fn cover_rotate(z: CoverPoint, m: i64, alpha: f64) -> Result<CoverPoint> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("rotation needs alpha > 0, got {alpha}")));
    }
    Ok(z.rotate(m, alpha))
}
