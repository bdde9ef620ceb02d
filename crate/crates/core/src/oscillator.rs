//! Parameter records, potentials, sector geometry, the rescaling map and
//! the quantum-monodromy action on `(x, E)`.

use crate::cover::CoverPoint;
use crate::error::{Error, Result};
use crate::C64;
use std::f64::consts::PI;

/// Frobenius branch: `+` subdominant at the origin, `−` dominant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// `(α, E, ℓ)` with `α > 0` and `Re ℓ > −1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub alpha: f64,
    pub e: C64,
    pub ell: C64,
}

impl OscillatorParams {
    pub fn new(alpha: f64, e: C64, ell: C64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
        }
        if !(ell.re > -0.5) {
            return Err(Error::Domain(format!("Re(ell) must exceed -1/2, got {ell}")));
        }
        if !(e.re.is_finite() && e.im.is_finite()) {
            return Err(Error::Domain("energy must be finite".into()));
        }
        Ok(Self { alpha, e, ell })
    }

    /// Real-parameter shorthand.
    pub fn real(alpha: f64, e: f64, ell: f64) -> Result<Self> {
        Self::new(alpha, C64::new(e, 0.0), C64::new(ell, 0.0))
    }

    /// Same `(α, ℓ)` at another energy.
    pub fn with_energy(&self, e: C64) -> Self {
        Self { e, ..*self }
    }

    /// `ℓ(ℓ+1)`.
    pub fn centrifugal(&self) -> C64 {
        self.ell * (self.ell + 1.0)
    }

    /// `β = (ℓ+1/2)/(α+1)`.
    pub fn beta(&self) -> C64 {
        (self.ell + 0.5) / (self.alpha + 1.0)
    }
}

/// `(α, ε, p, η)` for the large-degree regimes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RescaledParams {
    pub alpha: f64,
    pub eps: C64,
    pub p: C64,
    pub eta: Option<C64>,
}

impl RescaledParams {
    /// Rescaled record from `ε`; requires `Re p > 0`.
    pub fn new(alpha: f64, eps: C64, p: C64) -> Result<Self> {
        check_alpha_p(alpha, p)?;
        Ok(Self { alpha, eps, p, eta: None })
    }

    /// Rescaled record from `η`, with `ε = 1 + η/(α+1)^{2/3}`.
    pub fn from_eta(alpha: f64, eta: C64, p: C64) -> Result<Self> {
        check_alpha_p(alpha, p)?;
        let eps = 1.0 + eta / (alpha + 1.0).powf(2.0 / 3.0);
        Ok(Self { alpha, eps, p, eta: Some(eta) })
    }

    /// `ν = 2p(α+1) = ℓ + 1/2`.
    pub fn nu(&self) -> C64 {
        2.0 * self.p * (self.alpha + 1.0)
    }
}

fn check_alpha_p(alpha: f64, p: C64) -> Result<()> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    if p == C64::new(0.0, 0.0) {
        return Err(Error::Domain("p = 0: use the fixed-(E, ell) path".into()));
    }
    if !(p.re > 0.0) {
        return Err(Error::Domain(format!("Re(p) must be positive (use p -> -p), got {p}")));
    }
    Ok(())
}

/// `E = 4p²(α+1)²ε²`, `ℓ = 2p(α+1) − 1/2`.
pub fn rescale_params(rp: &RescaledParams) -> Result<OscillatorParams> {
    check_alpha_p(rp.alpha, rp.p)?;
    let a1 = rp.alpha + 1.0;
    let e = 4.0 * rp.p * rp.p * a1 * a1 * rp.eps * rp.eps;
    let ell = 2.0 * rp.p * a1 - 0.5;
    OscillatorParams::new(rp.alpha, e, ell)
}

/// `V(x) = x^{2α} + ℓ(ℓ+1)/x² − E`.
pub fn potential(params: &OscillatorParams, x: CoverPoint) -> C64 {
    x.pow(2.0 * params.alpha).to_complex() + params.centrifugal() * x.pow(-2.0).to_complex() - params.e
}

/// `V(x)` as `(mantissa, ledger)` so that `x^{2α}` may exceed the double
/// range.
pub fn potential_ledger(params: &OscillatorParams, x: CoverPoint) -> (C64, f64) {
    let big = x.pow(2.0 * params.alpha);
    let l = big.log_modulus.max(0.0);
    let head = C64::from_polar((big.log_modulus - l).exp(), big.arg);
    let rest = (params.centrifugal() * x.pow(-2.0).to_complex() - params.e) * (-l).exp();
    (head + rest, l)
}

/// `V̂(x) = (1 − (εx)²)/x² + x^{2α}/(4p²(α+1)²)`.
pub fn rescaled_potential(rp: &RescaledParams, x: CoverPoint) -> C64 {
    let xc = x.to_complex();
    let a1 = rp.alpha + 1.0;
    let ex = rp.eps * xc;
    (1.0 - ex * ex) / (xc * xc) + x.pow(2.0 * rp.alpha).to_complex() / (4.0 * rp.p * rp.p * a1 * a1)
}

/// `dV̂/dx`.
pub fn rescaled_potential_derivative(rp: &RescaledParams, x: CoverPoint) -> C64 {
    let xc = x.to_complex();
    let a1 = rp.alpha + 1.0;
    -2.0 / (xc * xc * xc) + 2.0 * rp.alpha * x.pow(2.0 * rp.alpha - 1.0).to_complex() / (4.0 * rp.p * rp.p * a1 * a1)
}

/// Quantum monodromy: `x → x e^{iπ/(α+1)}`, `E → E e^{−2iπ/(α+1)}`.
pub fn monodromy_transform(params: &OscillatorParams, x: CoverPoint) -> (CoverPoint, OscillatorParams) {
    let x2 = x.rotate(1, params.alpha);
    let e2 = params.e * C64::from_polar(1.0, -2.0 * PI / (params.alpha + 1.0));
    (x2, OscillatorParams { e: e2, ..*params })
}

/// Sector index `k` for `Σ_k` and `𝒮_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectorIndex {
    pub k: i64,
}

impl SectorIndex {
    /// Open argument range of `Σ_k`: `((2k−1)π/(2α+2), (2k+1)π/(2α+2))`.
    pub fn sigma(&self, alpha: f64) -> (f64, f64) {
        let h = PI / (2.0 * (alpha + 1.0));
        ((2 * self.k - 1) as f64 * h, (2 * self.k + 1) as f64 * h)
    }

    /// Open argument range of `𝒮_k = Σ_{k−1} ∪ closure(Σ_k) ∪ Σ_{k+1}`.
    pub fn stokes(&self, alpha: f64) -> (f64, f64) {
        let h = PI / (2.0 * (alpha + 1.0));
        ((2 * self.k - 3) as f64 * h, (2 * self.k + 3) as f64 * h)
    }

    pub fn in_sigma(&self, alpha: f64, x: &CoverPoint) -> bool {
        let (a, b) = self.sigma(alpha);
        x.arg > a && x.arg < b
    }

    pub fn in_stokes(&self, alpha: f64, x: &CoverPoint) -> bool {
        let (a, b) = self.stokes(alpha);
        x.arg > a && x.arg < b
    }

    /// Bisecting ray `arg x = kπ/(α+1)`.
    pub fn bisector(&self, alpha: f64) -> f64 {
        self.k as f64 * PI / (alpha + 1.0)
    }
}

/// Resonance diagnostics for the dominant Frobenius solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResonanceReport {
    /// `ℓ ∈ Λ = {i + αj}`.
    pub ell_in_lambda: bool,
    /// `ℓ + 1/2 ∈ Λ`.
    pub ell_half_in_lambda: bool,
    /// A divisor of the χ₋ recurrence vanishes: `ℓ + 1/2 = n + (α+1)j`.
    pub divisor_vanishes: bool,
}

impl ResonanceReport {
    pub fn any(&self) -> bool {
        self.ell_in_lambda || self.ell_half_in_lambda || self.divisor_vanishes
    }
}

fn in_lattice(v: C64, a: f64, b: f64, thresh: f64) -> bool {
    if v.im.abs() > thresh || v.re < -thresh {
        return false;
    }
    let jmax = (v.re / b).floor().max(0.0) as i64 + 1;
    (0..=jmax).any(|j| {
        let rest = v.re - b * j as f64;
        let i = (rest / a).round();
        i >= 0.0 && (rest - a * i).abs() < thresh
    })
}

/// Checks `ℓ` against the resonance set in both of its stated forms and
/// against the actual vanishing of a recurrence divisor.
pub fn resonance_report(alpha: f64, ell: C64) -> ResonanceReport {
    let thresh = 1e-8 * (1.0 + ell.norm());
    ResonanceReport {
        ell_in_lambda: in_lattice(ell, 1.0, alpha, thresh),
        ell_half_in_lambda: in_lattice(ell + 0.5, 1.0, alpha, thresh),
        divisor_vanishes: (ell + 0.5).norm() > thresh && in_lattice(ell + 0.5, 1.0, alpha + 1.0, thresh),
    }
}
