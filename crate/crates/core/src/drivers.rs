//! Experiment drivers shared by the command-line front end and the
//! acceptance suite.  Each driver returns a [`Report`]: a table of rows in
//! grid order plus a list of pass/fail checks.

use crate::asymptotics::{compare_determinant, summarize, LimitModel};
use crate::cover::CoverPoint;
use crate::determinants::{q_det, quantum_wronskian_residual, stokes, tq_residual};
use crate::error::{Error, Result};
use crate::oscillator::{Branch, OscillatorParams};
use crate::roots::{airy_scaled_zeros, density_integral, eps_zeros, q_zeros, ZeroRecord};
use crate::specfun::{
    airy, airy_asymptotic, airy_maclaurin, airy_negative_zeros, bessel_j, jnu_positive_zeros, mod_bessel_i,
    mod_bessel_i_asymptotic, mod_bessel_i_series, mod_bessel_k, mod_bessel_k_asymptotic, mod_bessel_k_reference,
    AiryKind,
};
use crate::C64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use std::f64::consts::PI;

/// A table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(if v { "pass" } else { "fail" }.to_string())
    }
}

/// A named pass/fail check with its measured value and threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value <= threshold`.
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), value, threshold, pass: value <= threshold }
    }

    /// A boolean check; `value` is reported as 1 or 0.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self { name: name.into(), value: if ok { 1.0 } else { 0.0 }, threshold: 1.0, pass: ok }
    }
}

/// Rows in grid order plus checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new(), checks: Vec::new() }
    }

    /// True when every check passes.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Plus => "plus",
        Branch::Minus => "minus",
    }
}

/// `Q±(E; ℓ)` over all `(α, E)` pairs.
pub fn eval_q(alphas: &[f64], energies: &[C64], ell: C64, branch: Branch, tol: f64) -> Result<Report> {
    let mut r = Report::new(&["alpha", "E_re", "E_im", "ell_re", "ell_im", "branch", "Q_re", "Q_im", "error_estimate"]);
    let pts: Vec<(f64, C64)> = alphas.iter().flat_map(|&a| energies.iter().map(move |&e| (a, e))).collect();
    let vals: Vec<_> = pts
        .par_iter()
        .map(|&(a, e)| q_det(&OscillatorParams::new(a, e, ell)?, branch, tol))
        .collect::<Result<_>>()?;
    for ((a, e), v) in pts.iter().zip(vals) {
        r.rows.push(vec![
            (*a).into(),
            e.re.into(),
            e.im.into(),
            ell.re.into(),
            ell.im.into(),
            branch_name(branch).into(),
            v.value.re.into(),
            v.value.im.into(),
            v.error_estimate.into(),
        ]);
    }
    Ok(r)
}

/// `σ_k(E; ℓ)` over all `(α, E)` pairs, with `σ_k/(2i)`.
pub fn eval_stokes(alphas: &[f64], energies: &[C64], ell: C64, k: i64, tol: f64) -> Result<Report> {
    let mut r = Report::new(&["alpha", "E_re", "E_im", "ell_re", "ell_im", "k", "sigma_re", "sigma_im", "sigma_over_2i_re", "sigma_over_2i_im"]);
    let pts: Vec<(f64, C64)> = alphas.iter().flat_map(|&a| energies.iter().map(move |&e| (a, e))).collect();
    let vals: Vec<_> =
        pts.par_iter().map(|&(a, e)| stokes(&OscillatorParams::new(a, e, ell)?, k, tol)).collect::<Result<_>>()?;
    for ((a, e), v) in pts.iter().zip(vals) {
        let s = v.value / C64::new(0.0, 2.0);
        r.rows.push(vec![
            (*a).into(),
            e.re.into(),
            e.im.into(),
            ell.re.into(),
            ell.im.into(),
            k.into(),
            v.value.re.into(),
            v.value.im.into(),
            s.re.into(),
            s.im.into(),
        ]);
    }
    Ok(r)
}

fn zero_rows(r: &mut Report, zs: &[ZeroRecord]) {
    for z in zs {
        r.rows.push(vec![z.index.into(), z.location.into(), z.bracket.0.into(), z.bracket.1.into(), z.refinement_residual.into()]);
    }
}

const ZERO_COLUMNS: [&str; 5] = ["index", "location", "bracket_lo", "bracket_hi", "residual"];

/// Zeros of `E ↦ Q₊(E; ℓ)` in `(0, E_max]`.
pub fn zeros(alpha: f64, ell: f64, e_max: f64, tol: f64) -> Result<Report> {
    let mut r = Report::new(&ZERO_COLUMNS);
    let zs = q_zeros(alpha, ell, e_max, tol)?;
    zero_rows(&mut r, &zs);
    r.checks.push(Check::holds(
        "every zero is bracketed and refined",
        zs.iter().all(|z| z.bracket.0 <= z.location && z.location <= z.bracket.1 && z.refinement_residual <= tol * z.location.abs().max(1.0)),
    ));
    Ok(r)
}

/// Zero count in `ε` against the density law.
pub fn density(alpha: f64, p: f64, interval: (f64, f64), tol: f64) -> Result<Report> {
    let mut r = Report::new(&["alpha", "p", "lo", "hi", "count", "count_refined_grid", "integral", "count_over_alpha1", "deviation", "bound"]);
    let zs = eps_zeros(alpha, p, interval, tol, 6.0)?;
    let fine = eps_zeros(alpha, p, interval, tol, 12.0)?;
    let integral = density_integral(interval, p)?;
    let a1 = alpha + 1.0;
    let n = zs.len();
    let dev = (n as f64 / a1 - integral).abs();
    r.rows.push(vec![
        alpha.into(),
        p.into(),
        interval.0.into(),
        interval.1.into(),
        n.into(),
        fine.len().into(),
        integral.into(),
        (n as f64 / a1).into(),
        dev.into(),
        (1.0 / a1).into(),
    ]);
    r.checks.push(Check::holds("count stable under grid-pitch halving", n == fine.len()));
    r.checks.push(Check::at_most("|n/(alpha+1) - density integral|", dev, 1.0 / a1));
    Ok(r)
}

/// Zeros in `η` with the Airy prediction `|a_k|/(2p^{2/3})`.
pub fn airy_zeros(alpha: f64, p: f64, count: usize, tol: f64) -> Result<Report> {
    let mut r = Report::new(&["index", "location", "bracket_lo", "bracket_hi", "residual", "airy_prediction", "relative_deviation"]);
    let zs = airy_scaled_zeros(alpha, p, count, tol)?;
    let a = airy_negative_zeros(count.max(1))?;
    for (z, ak) in zs.iter().zip(&a) {
        let pred = ak.abs() / (2.0 * p.powf(2.0 / 3.0));
        r.rows.push(vec![
            z.index.into(),
            z.location.into(),
            z.bracket.0.into(),
            z.bracket.1.into(),
            z.refinement_residual.into(),
            pred.into(),
            (z.location / pred - 1.0).abs().into(),
        ]);
    }
    r.checks.push(Check::holds("zeros strictly increasing", zs.windows(2).all(|w| w[0].location < w[1].location)));
    Ok(r)
}

/// Sup errors of `model` over `grid` for each `α`, with a check that they
/// decrease strictly in `α`.
pub fn verify_limit(model: LimitModel, alphas: &[f64], grid: &[f64], tol: f64) -> Result<Report> {
    let mut r = Report::new(&["model", "alpha", "grid_points", "sup_abs_err", "sup_weighted_err"]);
    let mut sups = Vec::new();
    for &a in alphas {
        let rows = compare_determinant(&model, a, grid, tol)?;
        let s = summarize(&rows).ok_or_else(|| Error::Domain("empty grid".into()))?;
        r.rows.push(vec![model.kind().into(), a.into(), grid.len().into(), s.sup_abs.into(), s.sup_weighted.into()]);
        sups.push(s.sup_weighted);
    }
    r.checks.push(Check::holds(
        format!("{} sup error strictly decreasing in alpha", model.kind()),
        sups.windows(2).all(|w| w[1] < w[0]),
    ));
    Ok(r)
}

/// TQ and quantum-Wronskian residuals at one parameter point; each must be
/// below `threshold` relative to its scale.
pub fn relations(alpha: f64, e: C64, ell: C64, tol: f64, threshold: f64) -> Result<Report> {
    let mut r = Report::new(&["relation", "alpha", "E_re", "E_im", "ell_re", "ell_im", "tol", "residual", "scale", "relative"]);
    let params = OscillatorParams::new(alpha, e, ell)?;
    let (tq, tq_s) = tq_residual(&params, Branch::Plus, tol)?;
    let (qw, qw_s) = quantum_wronskian_residual(&params, tol)?;
    for (name, res, scale) in [("tq", tq, tq_s), ("quantum_wronskian", qw, qw_s)] {
        let rel = res.norm() / scale;
        r.rows.push(vec![
            name.into(),
            alpha.into(),
            e.re.into(),
            e.im.into(),
            ell.re.into(),
            ell.im.into(),
            tol.into(),
            res.norm().into(),
            scale.into(),
            rel.into(),
        ]);
        r.checks.push(Check::at_most(format!("{name} relative residual"), rel, threshold));
    }
    Ok(r)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Bisection on a sign change of `f` in `[a, b]`.
fn bisect(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<f64> {
    let mut fa = f(a)?;
    if fa.signum() == f(b)?.signum() {
        return Err(Error::Search(format!("no sign change on [{a}, {b}]")));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let fm = f(m)?;
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Special-function checks: half-integer closed forms, the Airy
/// Wronskian, series/asymptotic overlap at `n_random` seeded random points,
/// and first zeros of `J₀` and `Ai` against bisection.
pub fn specfun_selftest(n_random: usize, seed: u64) -> Result<Report> {
    let mut r = Report::new(&["check", "value", "threshold", "status"]);
    let tol = 1e-15;
    let half = C64::new(0.5, 0.0);
    let pts = [C64::new(0.7, 0.0), C64::new(3.5, 0.0), C64::new(12.0, 0.0), C64::new(2.0, 1.5), C64::new(25.0, -4.0)];
    let mut worst = [0.0f64; 3];
    for &z in &pts {
        let cz = CoverPoint::from_complex(z)?;
        let j = bessel_j(half, cz, tol)?;
        worst[0] = worst[0].max(rel(j, (2.0 / (PI * z)).sqrt() * z.sin()));
        let i = mod_bessel_i(half, cz, tol)?;
        worst[1] = worst[1].max(rel(i, (2.0 / (PI * z)).sqrt() * z.sinh()));
        let k = mod_bessel_k(half, cz, tol)?;
        worst[2] = worst[2].max(rel(k, (PI / (2.0 * z)).sqrt() * (-z).exp()));
    }
    let mut checks = vec![
        Check::at_most("J_{1/2} closed form", worst[0], 1e-12),
        Check::at_most("I_{1/2} closed form", worst[1], 1e-12),
        Check::at_most("K_{1/2} closed form", worst[2], 1e-12),
    ];
    let mut wr: f64 = 0.0;
    for &z in &[C64::new(0.0, 0.0), C64::new(1.5, 0.0), C64::new(-6.0, 0.0), C64::new(3.0, 4.0), C64::new(-12.0, 5.0), C64::new(15.0, -2.0)] {
        let ai = airy(AiryKind::Ai, z, tol)?;
        let aip = airy(AiryKind::AiPrime, z, tol)?;
        let bi = airy(AiryKind::Bi, z, tol)?;
        let bip = airy(AiryKind::BiPrime, z, tol)?;
        let scale = (ai * bip).norm().max((aip * bi).norm()).max(1.0 / PI);
        wr = wr.max((ai * bip - aip * bi - 1.0 / PI).norm() / scale);
    }
    checks.push(Check::at_most("Airy Wronskian 1/pi", wr, 1e-12));
    // overlap region: |z| ∈ [16, 30] for K and I, |z| ∈ [5, 9] for Ai
    let mut rng = StdRng::seed_from_u64(seed);
    let mut excess: f64 = 0.0;
    for _ in 0..n_random {
        let nu = C64::new(rng.gen_range(0.0..2.0), 0.0);
        let rk = rng.gen_range(16.0..30.0);
        let th = rng.gen_range(-1.4..1.4);
        let z = CoverPoint::from_polar(rk, th)?;
        let a = mod_bessel_k_asymptotic(nu, z, 1e-14)?;
        let exact = mod_bessel_k_reference(nu, z.to_complex())?;
        excess = excess.max((a.value - exact).norm() / (a.remainder_bound + 1e-13 * exact.norm()));
        let a = mod_bessel_i_asymptotic(nu, z, 1e-14)?;
        let exact = mod_bessel_i_series(nu, z)?;
        // rounding of the series: ε·Σ|terms| = ε·I_ν(|z|)
        let rounding = 16.0 * f64::EPSILON * mod_bessel_i_series(nu, CoverPoint::real(rk))?.norm();
        excess = excess.max((a.value - exact).norm() / (a.remainder_bound + 1e-13 * exact.norm() + rounding));
        let za = C64::from_polar(rng.gen_range(5.0..9.0), rng.gen_range(-2.0..2.0));
        for kind in [AiryKind::Ai, AiryKind::AiPrime] {
            let a = airy_asymptotic(kind, za, 1e-14)?;
            let exact = airy_maclaurin(kind, za);
            excess = excess.max((a.value - exact).norm() / (a.remainder_bound + 1e-13 * exact.norm()));
        }
    }
    checks.push(Check::at_most(format!("series/asymptotic overlap within remainder bounds ({n_random} points)"), excess, 1.0));
    let j0 = jnu_positive_zeros(0.0, 1)?[0];
    let j0b = bisect(|x| Ok(bessel_j(C64::new(0.0, 0.0), CoverPoint::real(x), tol)?.re), 2.0, 3.0)?;
    checks.push(Check::at_most("first zero of J_0 vs bisection", (j0 - j0b).abs(), 1e-9));
    let a0 = airy_negative_zeros(1)?[0].abs();
    let a0b = bisect(|x| Ok(airy(AiryKind::Ai, C64::new(-x, 0.0), tol)?.re), 2.0, 3.0)?;
    checks.push(Check::at_most("first zero of Ai vs bisection", (a0 - a0b).abs(), 1e-9));
    for c in &checks {
        r.rows.push(vec![c.name.as_str().into(), c.value.into(), c.threshold.into(), c.pass.into()]);
    }
    r.checks = checks;
    Ok(r)
}
