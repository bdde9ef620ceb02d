//! Adaptive Dormand–Prince 5(4) integration of `ψ'' = V(x)ψ` along rays,
//! arcs and straight segments of the cover, with a scalar exponent ledger.

use crate::cover::CoverPoint;
use crate::error::{Error, Result};
use crate::C64;

/// A solution of the ODE at a point: physical value is `value·e^{ledger}`
/// and physical derivative is `derivative·e^{ledger}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionSample {
    pub x: CoverPoint,
    pub value: C64,
    pub derivative: C64,
    pub ledger: f64,
}

impl SolutionSample {
    pub fn new(x: CoverPoint, value: C64, derivative: C64, ledger: f64) -> Self {
        let mut s = Self { x, value, derivative, ledger };
        s.renormalize();
        s
    }

    /// Physical value (may overflow for huge ledgers).
    pub fn physical_value(&self) -> C64 {
        self.value * self.ledger.exp()
    }

    pub fn physical_derivative(&self) -> C64 {
        self.derivative * self.ledger.exp()
    }

    /// Moves the magnitude of `(value, derivative)` into the ledger.
    pub fn renormalize(&mut self) {
        let m = self.value.norm().max(self.derivative.norm());
        if m > 0.0 && m.is_finite() {
            self.value /= m;
            self.derivative /= m;
            self.ledger += m.ln();
        }
    }

    /// Multiplies the sample by a complex constant.
    pub fn scaled(&self, c: C64) -> Self {
        Self { value: self.value * c, derivative: self.derivative * c, ..*self }
    }
}

/// A piece of an integration path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    /// `x = r e^{iθ}` with `r` from `r0` to `r1`.
    Ray { theta: f64, r0: f64, r1: f64 },
    /// `x = r e^{iθ}` with `θ` from `theta0` to `theta1`.
    Arc { r: f64, theta0: f64, theta1: f64 },
    /// Straight segment between two cover points; the argument is tracked
    /// continuously from the start (the segment must avoid the origin).
    Line { from: CoverPoint, to: CoverPoint },
}

impl Segment {
    fn span(&self) -> (f64, f64) {
        match *self {
            Segment::Ray { r0, r1, .. } => (r0, r1),
            Segment::Arc { theta0, theta1, .. } => (theta0, theta1),
            Segment::Line { .. } => (0.0, 1.0),
        }
    }

    /// Point and `dx/ds` at parameter `s`.
    fn eval(&self, s: f64) -> (CoverPoint, C64) {
        match *self {
            Segment::Ray { theta, .. } => (CoverPoint::new(s.ln(), theta), C64::from_polar(1.0, theta)),
            Segment::Arc { r, .. } => {
                let x = CoverPoint::new(r.ln(), s);
                (x, C64::new(0.0, 1.0) * x.to_complex())
            }
            Segment::Line { from, to } => {
                let a = from.to_complex();
                let d = to.to_complex() - a;
                let z = a + s * d;
                let rel = (z / a).arg();
                (CoverPoint::new(z.norm().ln(), from.arg + rel), d)
            }
        }
    }

    /// Start and end points.
    pub fn endpoints(&self) -> (CoverPoint, CoverPoint) {
        let (a, b) = self.span();
        match *self {
            Segment::Line { from, to } => (from, CoverPoint::new(to.log_modulus, from.arg + (to.to_complex() / from.to_complex()).arg())),
            _ => (self.eval(a).0, self.eval(b).0),
        }
    }
}

/// Integration statistics.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
}

const MAX_STEPS: usize = 2_000_000;

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// One Dormand–Prince step of size `h` from `(s, y)`; returns the fifth-order
/// update and the embedded error estimate.
fn dp5_step(f: &dyn Fn(f64, &[C64; 2]) -> [C64; 2], s: f64, y: &[C64; 2], h: f64) -> ([C64; 2], [C64; 2]) {
    let mut k = [[C64::new(0.0, 0.0); 2]; 7];
    for i in 0..7 {
        let mut yi = *y;
        for (j, kj) in k.iter().enumerate().take(i) {
            let a = A[i][j];
            if a != 0.0 {
                yi[0] += h * a * kj[0];
                yi[1] += h * a * kj[1];
            }
        }
        k[i] = f(s + C[i] * h, &yi);
    }
    let mut ynew = *y;
    let mut err = [C64::new(0.0, 0.0); 2];
    for i in 0..7 {
        ynew[0] += h * B[i] * k[i][0];
        ynew[1] += h * B[i] * k[i][1];
        err[0] += h * E[i] * k[i][0];
        err[1] += h * E[i] * k[i][1];
    }
    (ynew, err)
}

/// Adaptive driver: `norm(y, ynew, err, s)` returns the error in units of
/// the tolerance; `accept` post-processes an accepted state.
fn drive(
    f: &dyn Fn(f64, &[C64; 2]) -> [C64; 2],
    norm: &dyn Fn(&[C64; 2], &[C64; 2], &[C64; 2], f64) -> f64,
    accept: &mut dyn FnMut(&mut [C64; 2]),
    s0: f64,
    s1: f64,
    y0: [C64; 2],
    h0: f64,
) -> Result<([C64; 2], OdeStats)> {
    let mut stats = OdeStats::default();
    let dir = (s1 - s0).signum();
    let total = (s1 - s0).abs();
    let mut y = y0;
    let mut s = s0;
    let mut h = h0.abs().min(total) * dir;
    while (s1 - s) * dir > 0.0 {
        if stats.accepted + stats.rejected > MAX_STEPS {
            return Err(Error::Integration(format!("step budget exhausted at s = {s}")));
        }
        let last = (s + h - s1) * dir >= 0.0;
        if last {
            h = s1 - s;
        } else {
            // exactly representable step, so that s advances by h itself
            h = (s + h) - s;
        }
        let (ynew, err) = dp5_step(f, s, &y, h);
        let en = norm(&y, &ynew, &err, s + h);
        if !en.is_finite() {
            h *= 0.2;
            stats.rejected += 1;
        } else {
            if en <= 1.0 {
                s = if last { s1 } else { s + h };
                y = ynew;
                accept(&mut y);
                stats.accepted += 1;
            } else {
                stats.rejected += 1;
            }
            let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
        }
        if h.abs() < 1e-14 * total && (s1 - s) * dir > 0.0 {
            return Err(Error::Integration(format!("step size underflow at s = {s}")));
        }
    }
    Ok((y, stats))
}

/// Integrates along one segment.  `v` evaluates the potential at a cover
/// point.  `rtol` is the per-step relative tolerance.
pub fn integrate_segment(
    seg: &Segment,
    start: SolutionSample,
    v: &dyn Fn(CoverPoint) -> C64,
    rtol: f64,
) -> Result<(SolutionSample, OdeStats)> {
    let (s0, s1) = seg.span();
    let end_x = seg.endpoints().1;
    if s0 == s1 {
        return Ok((SolutionSample { x: end_x, ..start }, OdeStats::default()));
    }
    let weight = |s: f64| v(seg.eval(s).0).norm().sqrt().max(1.0);
    let (x0, dx0) = seg.eval(s0);
    let h0 = 0.05 / (v(x0).norm().sqrt().max(1.0) * dx0.norm());
    let f = |s: f64, y: &[C64; 2]| {
        let (x, dx) = seg.eval(s);
        [y[1] * dx, v(x) * y[0] * dx]
    };
    let norm = |y: &[C64; 2], yn: &[C64; 2], e: &[C64; 2], s: f64| {
        let w = weight(s);
        let scale = (y[0].norm() * w).max(y[1].norm()).max((yn[0].norm() * w).max(yn[1].norm()));
        (e[0].norm() * w).max(e[1].norm()) / (rtol * scale)
    };
    let mut ledger = start.ledger;
    let mut accept = |y: &mut [C64; 2]| {
        let m = y[0].norm().max(y[1].norm());
        if !(1e-3..=1e3).contains(&m) && m > 0.0 {
            y[0] /= m;
            y[1] /= m;
            ledger += m.ln();
        }
    };
    let (y, stats) = drive(&f, &norm, &mut accept, s0, s1, [start.value, start.derivative], h0)?;
    Ok((SolutionSample::new(end_x, y[0], y[1], ledger), stats))
}

/// Compensated running sum.
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn new(v: f64) -> Self {
        Self { sum: v, comp: 0.0 }
    }

    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Integrates the Riccati form `y' = V − y²`, `(ln ψ)' = y` along a
/// segment.  Suited to stretches where `ψ` has no zeros and is
/// exponentially small or large, where its cost is set by stability rather
/// than by resolving the exponential.
pub fn integrate_riccati(
    seg: &Segment,
    start: SolutionSample,
    v: &dyn Fn(CoverPoint) -> C64,
    rtol: f64,
) -> Result<(SolutionSample, OdeStats)> {
    if start.value == C64::new(0.0, 0.0) {
        return Err(Error::Integration("Riccati start at a zero of the solution".into()));
    }
    let zero = |_: CoverPoint| (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    let log = LogSample {
        x: start.x,
        log_rel: start.value.ln() + start.ledger,
        y: start.derivative / start.value,
    };
    let (out, stats) = integrate_riccati_rel(seg, log, v, &zero, rtol)?;
    Ok((out.to_sample(&zero), stats))
}

/// `ψ` in logarithmic form relative to a reference phase `g`:
/// `ln ψ(x) = log_rel + g(x)` and `y = ψ'/ψ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSample {
    pub x: CoverPoint,
    pub log_rel: C64,
    pub y: C64,
}

impl LogSample {
    /// Converts to a ledger sample; `g` returns `(g(x), g'(x))`.
    pub fn to_sample(&self, g: &dyn Fn(CoverPoint) -> (C64, C64)) -> SolutionSample {
        let l = self.log_rel + g(self.x).0;
        let val = C64::from_polar(1.0, l.im);
        SolutionSample::new(self.x, val, self.y * val, l.re)
    }
}

/// Riccati integration of `y' = V − y²` carrying `ln ψ − g(x)`, so that a
/// large known phase `g` never enters the accumulated sum.
pub fn integrate_riccati_rel(
    seg: &Segment,
    start: LogSample,
    v: &dyn Fn(CoverPoint) -> C64,
    g: &dyn Fn(CoverPoint) -> (C64, C64),
    rtol: f64,
) -> Result<(LogSample, OdeStats)> {
    let (s0, s1) = seg.span();
    let end_x = seg.endpoints().1;
    if s0 == s1 {
        return Ok((LogSample { x: end_x, ..start }, OdeStats::default()));
    }
    let f = |s: f64, y: &[C64; 2]| {
        let (x, dx) = seg.eval(s);
        [(v(x) - y[0] * y[0]) * dx, (y[0] - g(x).1) * dx]
    };
    let norm = |y: &[C64; 2], yn: &[C64; 2], er: &[C64; 2], _s: f64| {
        let sy = y[0].norm().max(yn[0].norm()).max(1.0);
        (er[0].norm() / sy).max(er[1].norm()) / rtol
    };
    let h0 = 0.5 / (start.y.norm().max(1.0) * seg.eval(s0).1.norm());
    // increments are summed with compensation instead of being carried in
    // the stepper state
    let mut log = [Neumaier::new(start.log_rel.re), Neumaier::new(start.log_rel.im)];
    let mut accept = |y: &mut [C64; 2]| {
        log[0].add(y[1].re);
        log[1].add(y[1].im);
        y[1] = C64::new(0.0, 0.0);
    };
    let (y, stats) = drive(&f, &norm, &mut accept, s0, s1, [start.y, C64::new(0.0, 0.0)], h0)?;
    let out = LogSample { x: end_x, log_rel: C64::new(log[0].value(), log[1].value()), y: y[0] };
    Ok((out, stats))
}

/// Integrates along a concatenation of segments.
pub fn integrate_path(
    path: &[Segment],
    start: SolutionSample,
    v: &dyn Fn(CoverPoint) -> C64,
    rtol: f64,
) -> Result<(SolutionSample, OdeStats)> {
    let mut cur = start;
    let mut total = OdeStats::default();
    for seg in path {
        let (next, st) = integrate_segment(seg, cur, v, rtol)?;
        cur = next;
        total.accepted += st.accepted;
        total.rejected += st.rejected;
    }
    Ok((cur, total))
}
