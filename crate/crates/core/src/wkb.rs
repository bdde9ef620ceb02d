//! Turning points, action integrals, the cut, and the Airy-type WKB
//! approximants `X̂±` for the rescaled potential
//! `V̂(x) = (1 − (εx)²)/x² + x^{2α}/(4p²(α+1)²)` on the sector
//! `|arg x| < π/(2α+2)`.
//!
//! The action `(2/3)(−S)^{3/2} = ∫_{x₊}^{x} √V̂ dt` is computed by composite
//! 16-point Gauss–Legendre quadrature along a ray from `x₊` followed by an
//! arc, with `t = x₊ + s²(·)` on the first piece.  The branch of `√V̂` is
//! fixed at the first node from the local form near `x₊` and continued by
//! sign tracking.  The positive branch is the one with `(2/3)(−S)^{3/2} > 0`
//! on `(0, x₊)`, i.e. the branch that makes `X̂₊` recessive at the origin.

use crate::cover::CoverPoint;
use crate::error::{Error, Result};
use crate::ode::SolutionSample;
use crate::oscillator::{rescaled_potential, rescaled_potential_derivative, Branch, RescaledParams};
use crate::specfun::{airy_ledger, lgamma, AiryKind};
use crate::C64;
use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

/// Default lower bound on `|p|` for [`turning_points`].
pub const DEFAULT_P_FLOOR: f64 = 0.05;

/// The two turning points of `V̂` in the central sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPoints {
    /// The simple zero near `1/ε`.
    pub x_plus: C64,
    /// The simple zero near `(2(α+1)pε)^{1/α}`.
    pub x_zero: C64,
    /// `|x²V̂|` at `x_plus` and `x_zero`.
    pub residuals: [f64; 2],
}

/// Where an action evaluation point lies relative to `|εx| = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathTag {
    Inner,
    Rim,
    Outer,
}

/// `(2/3)(−S)^{3/2}` at `x` with its branch and region tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionValue {
    pub x: CoverPoint,
    pub branch: Branch,
    pub value: C64,
    pub path_tag: PathTag,
}

/// The cut joining `x₊` to `x₀` through `arg x = π/(2α+2)`: an arc at
/// `|x₊|`, a piece of the boundary ray, and an arc at `|x₀|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutCurve {
    pub alpha: f64,
    pub eps: C64,
    pub p: C64,
    pub x_plus: C64,
    pub x_zero: C64,
}

impl CutCurve {
    pub fn new(rp: &RescaledParams, tp: &TurningPoints) -> Self {
        Self { alpha: rp.alpha, eps: rp.eps, p: rp.p, x_plus: tp.x_plus, x_zero: tp.x_zero }
    }

    fn boundary(&self) -> f64 {
        PI / (2.0 * self.alpha + 2.0)
    }
}

/// `x²V̂(x) = 1 − (εx)² + x^{2α+2}/(4p²(α+1)²)` and its derivative.
fn g_and_dg(rp: &RescaledParams, x: C64) -> (C64, C64) {
    let a1 = rp.alpha + 1.0;
    let k = 4.0 * rp.p * rp.p * a1 * a1;
    let xp = x.powf(2.0 * rp.alpha + 1.0);
    let e2 = rp.eps * rp.eps;
    (1.0 - e2 * x * x + xp * x / k, -2.0 * e2 * x + 2.0 * a1 * xp / k)
}

/// Newton-refined turning points from the seeds `1/ε` and
/// `(2(α+1)pε)^{1/α}`; `p_floor` is the smallest admissible `|p|`.
pub fn turning_points(rp: &RescaledParams, p_floor: f64, tol: f64) -> Result<TurningPoints> {
    if !(rp.eps.norm() >= 1.0) {
        return Err(Error::Domain(format!("turning points need |eps| >= 1, got {}", rp.eps)));
    }
    if !(rp.p.norm() >= p_floor) || !(rp.p.re > 0.0) {
        return Err(Error::Domain(format!("turning points need |p| >= {p_floor} and Re p > 0, got {}", rp.p)));
    }
    let a1 = rp.alpha + 1.0;
    // x₊: Newton on x²V̂
    let mut xp = 1.0 / rp.eps;
    let mut ok = false;
    for _ in 0..100 {
        let (g, dg) = g_and_dg(rp, xp);
        let step = g / dg;
        xp -= step;
        if step.norm() <= tol * xp.norm() {
            ok = true;
            break;
        }
    }
    if !ok || !xp.re.is_finite() {
        return Err(Error::Search("Newton did not converge for x_plus".into()));
    }
    // x₀: Newton on (2α+2)ln x − ln(4p²(α+1)²((εx)² − 1))
    let k = 4.0 * rp.p * rp.p * a1 * a1;
    let e2 = rp.eps * rp.eps;
    let mut x0 = (2.0 * a1 * rp.p * rp.eps).powf(1.0 / rp.alpha);
    ok = false;
    for _ in 0..100 {
        let q = e2 * x0 * x0 - 1.0;
        let h = 2.0 * a1 * x0.ln() - (k * q).ln();
        let dh = 2.0 * a1 / x0 - 2.0 * e2 * x0 / q;
        let step = h / dh;
        x0 -= step;
        if step.norm() <= tol * x0.norm() {
            ok = true;
            break;
        }
    }
    if !ok || !x0.re.is_finite() {
        return Err(Error::Search("Newton did not converge for x_zero".into()));
    }
    if (xp - x0).norm() < 1e-6 * xp.norm() {
        return Err(Error::Search("turning points collide".into()));
    }
    let (gp, dgp) = g_and_dg(rp, xp);
    let (g0, dg0) = g_and_dg(rp, x0);
    if dgp.norm() < 1e-10 || dg0.norm() < 1e-10 * e2.norm() {
        return Err(Error::Search("turning point is not simple".into()));
    }
    Ok(TurningPoints { x_plus: xp, x_zero: x0, residuals: [gp.norm(), g0.norm()] })
}

/// `√(1−(εx)²) − arctanh√(1−(εx)²)`.
pub fn action_proxy_inner(eps: C64, x: C64) -> C64 {
    let w = (1.0 - eps * eps * x * x).sqrt();
    w - w.atanh()
}

/// `√((εx)²−1) − arctan√((εx)²−1)`.
pub fn action_proxy_outer(eps: C64, x: C64) -> C64 {
    let w = (eps * eps * x * x - 1.0).sqrt();
    w - w.atan()
}

/// Membership of `x` in the cut within the geometric tolerance.
pub fn cut_contains(cut: &CutCurve, x: C64, tol_geom: f64) -> bool {
    let b = cut.boundary();
    let (r, th) = (x.norm(), x.arg());
    let (rp, tp) = (cut.x_plus.norm(), cut.x_plus.arg());
    let (r0, t0) = (cut.x_zero.norm(), cut.x_zero.arg());
    let ang = tol_geom / r.max(1e-300);
    let on_arc = |rc: f64, tc: f64| (r - rc).abs() <= tol_geom && th >= tc - ang && th <= b + ang;
    let on_ray = (th - b).abs() <= ang && r >= rp - tol_geom && r <= r0 + tol_geom;
    on_arc(rp, tp) || on_arc(r0, t0) || on_ray
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
fn gauss_legendre_16() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| {
        let n = 16;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        out
    })
}

/// A piece of an action path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathPiece {
    /// Straight segment; when `from` is `x₊` the square-root substitution is
    /// used.
    Line { from: C64, to: C64 },
    /// `r e^{iθ}` for `θ` from `theta0` to `theta1`.
    Arc { r: f64, theta0: f64, theta1: f64 },
}

impl PathPiece {
    fn end(&self) -> C64 {
        match *self {
            PathPiece::Line { to, .. } => to,
            PathPiece::Arc { r, theta1, .. } => C64::from_polar(r, theta1),
        }
    }

    /// Point and `dt/du` at `u ∈ [0, 1]`; `substitute` applies `u = s²`.
    fn eval(&self, u: f64, substitute: bool) -> (C64, C64) {
        match *self {
            PathPiece::Line { from, to } => {
                if substitute {
                    (from + u * u * (to - from), 2.0 * u * (to - from))
                } else {
                    (from + u * (to - from), to - from)
                }
            }
            PathPiece::Arc { r, theta0, theta1 } => {
                let th = theta0 + u * (theta1 - theta0);
                let z = C64::from_polar(r, th);
                (z, C64::new(0.0, theta1 - theta0) * z)
            }
        }
    }
}

/// Continuation state of the integrand branch.
struct BranchTracker<'a> {
    rp: &'a RescaledParams,
    prev: C64,
}

impl BranchTracker<'_> {
    fn sqrt_v(&mut self, t: C64) -> C64 {
        let v = rescaled_potential(self.rp, CoverPoint::new(t.norm().ln(), t.arg()));
        let s = v.sqrt();
        let s = if (s - self.prev).norm() <= (s + self.prev).norm() { s } else { -s };
        self.prev = s;
        s
    }
}

/// Langer data at `x₊`: `c` with `−S ≈ c(t − x₊)`, `c³ = V̂'(x₊)`, the cube
/// root continuous with the real negative root at real parameters.
fn langer_slope(rp: &RescaledParams, xp: C64) -> C64 {
    let d = rescaled_potential_derivative(rp, CoverPoint::new(xp.norm().ln(), xp.arg()));
    -(-d).powf(1.0 / 3.0)
}

/// `ζ^{1/2}` for `ζ = c(t − x₊)` with `arg ζ ∈ (−π/2, 3π/2]`.
fn local_sqrt_zeta(c: C64, dt: C64) -> C64 {
    let z = c * dt;
    let mut a = z.arg();
    if a <= -PI / 2.0 {
        a += 2.0 * PI;
    }
    C64::from_polar(z.norm().sqrt(), a / 2.0)
}

/// Result of integrating along a path: total action, integrand at the end,
/// `ζ^{1/2}` continued along the panel ends, and the number of panels.
struct PathIntegral {
    value: C64,
    sqrt_v_end: C64,
    sqrt_zeta_end: C64,
}

/// Picks the cube root of `w` nearest to `prev`.
fn nearest_cube_root(w: C64, prev: C64) -> C64 {
    let r = w.powf(1.0 / 3.0);
    let rot = C64::from_polar(1.0, 2.0 * PI / 3.0);
    [r, r * rot, r * rot * rot]
        .into_iter()
        .min_by(|a, b| (a - prev).norm().partial_cmp(&(b - prev).norm()).unwrap())
        .unwrap()
}

fn integrate_path(rp: &RescaledParams, xp: C64, pieces: &[PathPiece], tol: f64) -> Result<PathIntegral> {
    let gl = gauss_legendre_16();
    let c = langer_slope(rp, xp);
    // initial branch from the local form √V̂ ≈ c·ζ^{1/2}
    let first_dt = match pieces.first() {
        Some(p) => p.end() - xp,
        None => return Ok(PathIntegral { value: C64::default(), sqrt_v_end: C64::default(), sqrt_zeta_end: C64::default() }),
    };
    let probe = first_dt * 1e-6;
    let mut tracker = BranchTracker { rp, prev: c * local_sqrt_zeta(c, probe) };
    let mut total = C64::default();
    let mut sqrt_zeta = local_sqrt_zeta(c, probe);
    for (k, piece) in pieces.iter().enumerate() {
        let substitute = k == 0;
        let start_prev = tracker.prev;
        let mut panels = 8usize;
        let mut last: Option<(C64, Vec<C64>, C64)> = None;
        loop {
            tracker.prev = start_prev;
            let mut sum = C64::default();
            let mut cumulative = Vec::with_capacity(panels);
            let h = 1.0 / panels as f64;
            for j in 0..panels {
                let a = j as f64 * h;
                let mut ps = C64::default();
                for &(node, w) in gl {
                    let u = a + 0.5 * h * (node + 1.0);
                    let (t, dt) = piece.eval(u, substitute);
                    ps += w * tracker.sqrt_v(t) * dt;
                }
                sum += 0.5 * h * ps;
                cumulative.push(sum);
            }
            let (t_end, _) = piece.eval(1.0, substitute);
            let end_val = tracker.sqrt_v(t_end);
            if let Some((prev_sum, _, _)) = &last {
                if (sum - prev_sum).norm() <= tol * sum.norm().max(1.0) {
                    last = Some((sum, cumulative, end_val));
                    break;
                }
            }
            last = Some((sum, cumulative, end_val));
            panels *= 2;
            if panels > 1 << 16 {
                return Err(Error::Precision("action quadrature did not converge".into()));
            }
        }
        let (sum, cumulative, end_val) = last.unwrap();
        for s in cumulative {
            sqrt_zeta = nearest_cube_root(1.5 * (total + s), sqrt_zeta);
        }
        total += sum;
        tracker.prev = end_val;
    }
    Ok(PathIntegral { value: total, sqrt_v_end: tracker.prev, sqrt_zeta_end: sqrt_zeta })
}

/// The default path: the ray through `x₊` to radius `|x|`, then the arc to
/// `arg x`.
pub fn default_path(xp: C64, x: C64) -> Vec<PathPiece> {
    let r = x.norm();
    let mid = xp * (r / xp.norm());
    let mut out = vec![PathPiece::Line { from: xp, to: mid }];
    if (x.arg() - xp.arg()).abs() > 0.0 {
        out.push(PathPiece::Arc { r, theta0: xp.arg(), theta1: x.arg() });
    }
    out
}

fn check_point(rp: &RescaledParams, tp: &TurningPoints, x: CoverPoint) -> Result<C64> {
    let b = PI / (2.0 * rp.alpha + 2.0);
    if !(x.arg.abs() < b) {
        return Err(Error::Geometry(format!("arg x = {} outside the central sector", x.arg)));
    }
    let xc = x.to_complex();
    if xc.norm() >= tp.x_zero.norm() {
        return Err(Error::Geometry("|x| >= |x_zero|: the default path would cross the cut".into()));
    }
    let cut = CutCurve::new(rp, tp);
    if (xc - tp.x_plus).norm() > 1e-14 && cut_contains(&cut, xc, 1e-12) {
        return Err(Error::Geometry(format!("x = {xc} lies on the cut")));
    }
    Ok(xc)
}

fn path_tag(rp: &RescaledParams, x: C64) -> PathTag {
    let w = 1.0 / (rp.p.norm_sqr() * (rp.alpha + 1.0).powi(2));
    let ex = (rp.eps * x).norm();
    if (ex - 1.0).abs() <= w {
        PathTag::Rim
    } else if ex < 1.0 {
        PathTag::Inner
    } else {
        PathTag::Outer
    }
}

/// `(2/3)(−S)^{3/2}` at `x` along [`default_path`].
pub fn action(rp: &RescaledParams, x: CoverPoint, branch: Branch, tol: f64) -> Result<ActionValue> {
    let tp = turning_points(rp, DEFAULT_P_FLOOR, 1e-15)?;
    action_with(rp, &tp, x, branch, tol)
}

/// [`action`] with precomputed turning points.
pub fn action_with(rp: &RescaledParams, tp: &TurningPoints, x: CoverPoint, branch: Branch, tol: f64) -> Result<ActionValue> {
    let xc = check_point(rp, tp, x)?;
    let path = default_path(tp.x_plus, xc);
    action_along(rp, tp, &path, x, branch, tol)
}

/// `(2/3)(−S)^{3/2}` along an explicit path starting at `x₊`.
pub fn action_along(
    rp: &RescaledParams,
    tp: &TurningPoints,
    path: &[PathPiece],
    x: CoverPoint,
    branch: Branch,
    tol: f64,
) -> Result<ActionValue> {
    let v = integrate_path(rp, tp.x_plus, path, tol)?.value;
    Ok(ActionValue { x, branch, value: branch.sign() * v, path_tag: path_tag(rp, x.to_complex()) })
}

/// `ln` of `2√π(2p(α+1))^{1/6}ε^{−2p(α+1)}(2/e)^{2p(α+1)}/Γ(1+2p)`.
pub fn xhat_log_constant(rp: &RescaledParams) -> C64 {
    let nu = rp.nu();
    (2.0 * PI.sqrt()).ln() + nu.ln() / 6.0 - nu * rp.eps.ln() + nu * (LN_2 - 1.0) - lgamma(1.0 + 2.0 * rp.p)
}

/// `X̂₊ = C(S')^{−1/2}Ai(−ν^{2/3}S)` (`branch = Plus`) or
/// `X̂₋ = C^{−1}(S')^{−1/2}Bi(−ν^{2/3}S)` (`branch = Minus`), `ν = 2p(α+1)`,
/// with `C` from [`xhat_log_constant`], on the positive branch of the
/// action.
pub fn wkb_xhat(rp: &RescaledParams, x: CoverPoint, branch: Branch, tol: f64) -> Result<SolutionSample> {
    let tp = turning_points(rp, DEFAULT_P_FLOOR, 1e-15)?;
    let xc = check_point(rp, &tp, x)?;
    if (xc - tp.x_plus).norm() < 1e-10 * xc.norm() {
        return Err(Error::Geometry("X-hat is evaluated off the turning point".into()));
    }
    let path = default_path(tp.x_plus, xc);
    let pi = integrate_path(rp, tp.x_plus, &path, tol)?;
    let sz = pi.sqrt_zeta_end;
    let zeta = sz * sz;
    // S' = −√V̂/ζ^{1/2}; from S'²ζ = V̂: 2S'S'' = V̂'/ζ + V̂S'/ζ²
    let xcp = CoverPoint::new(xc.norm().ln(), xc.arg());
    let v = rescaled_potential(rp, xcp);
    let dv = rescaled_potential_derivative(rp, xcp);
    let s1 = -pi.sqrt_v_end / sz;
    if s1.norm() == 0.0 {
        return Err(Error::Precision("dS/dx vanishes".into()));
    }
    let s2 = (dv / zeta + v * s1 / (zeta * zeta)) / (2.0 * s1);
    let nu = rp.nu();
    let n23 = nu.powf(2.0 / 3.0);
    let arg = n23 * zeta;
    let (kind, dkind, sign) = match branch {
        Branch::Plus => (AiryKind::Ai, AiryKind::AiPrime, 1.0),
        Branch::Minus => (AiryKind::Bi, AiryKind::BiPrime, -1.0),
    };
    let (a, la) = airy_ledger(kind, arg, tol.min(1e-12))?;
    let (ad, lad) = airy_ledger(dkind, arg, tol.min(1e-12))?;
    let lc = sign * xhat_log_constant(rp);
    let amp = s1.powf(-0.5);
    // d/dx[(S')^{−1/2}F(ν^{2/3}ζ)] = −½(S')^{−3/2}S''F − ν^{2/3}(S')^{1/2}F'
    let l = la.max(lad);
    let (a, ad) = (a * (la - l).exp(), ad * (lad - l).exp());
    let value = amp * a;
    let deriv = -0.5 * amp / s1 * s2 * a - n23 * s1.sqrt() * ad;
    let phase = C64::from_polar(1.0, lc.im);
    Ok(SolutionSample::new(x, value * phase, deriv * phase, l + lc.re))
}
