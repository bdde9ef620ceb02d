//! Command dispatch, report writing and exit status.

use crate::config::{Command, RunConfig};
use crate::emit::emit;
use specdet::asymptotics::LimitModel;
use specdet::drivers::{self, Check, Report};
use specdet::{Branch, C64};
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Result of a run: the (possibly partial) report and the first numerical
/// error, if any.
pub struct Outcome {
    pub report: Report,
    pub error: Option<specdet::Error>,
}

/// Runs a per-`α` driver and concatenates the reports in `α` order; stops
/// at the first failure, keeping completed rows.
fn per_alpha(alphas: &[f64], f: impl Fn(f64) -> specdet::Result<Report>) -> Outcome {
    let mut out: Option<Report> = None;
    for &a in alphas {
        match f(a) {
            Ok(r) => match &mut out {
                None => out = Some(r),
                Some(acc) => {
                    acc.rows.extend(r.rows);
                    acc.checks.extend(r.checks);
                }
            },
            Err(e) => {
                let report = out.unwrap_or(Report { columns: Vec::new(), rows: Vec::new(), checks: Vec::new() });
                return Outcome { report, error: Some(e) };
            }
        }
    }
    Outcome { report: out.unwrap_or(Report { columns: Vec::new(), rows: Vec::new(), checks: Vec::new() }), error: None }
}

fn single(r: specdet::Result<Report>) -> Outcome {
    match r {
        Ok(report) => Outcome { report, error: None },
        Err(e) => Outcome { report: Report { columns: Vec::new(), rows: Vec::new(), checks: Vec::new() }, error: Some(e) },
    }
}

/// Verifies the limit model for all `α` at once so the monotonicity check
/// spans the whole list.
fn verify(model: LimitModel, c: &RunConfig, grid: &[f64]) -> Outcome {
    single(drivers::verify_limit(model, &c.alphas, grid, c.tol))
}

pub fn execute(c: &RunConfig) -> Outcome {
    match c.command {
        Command::EvalQ => per_alpha(&c.alphas, |a| drivers::eval_q(&[a], &c.energies, c.ell, c.branch, c.tol)),
        Command::EvalStokes => per_alpha(&c.alphas, |a| drivers::eval_stokes(&[a], &c.energies, c.ell, c.k, c.tol)),
        Command::Zeros => single(drivers::zeros(c.alphas[0], c.ell.re, c.emax.unwrap_or(0.0), c.root_tol)),
        Command::Density => single(drivers::density(c.alphas[0], c.p, c.interval.unwrap_or((1.5, 1.5)), c.root_tol)),
        Command::AiryZeros => single(drivers::airy_zeros(c.alphas[0], c.p, c.count, c.root_tol)),
        Command::VerifyThm1 => {
            let grid: Vec<f64> = c.energies.iter().map(|e| e.re).collect();
            verify(LimitModel::Bessel { ell: c.ell, branch: Branch::Plus }, c, &grid)
        }
        Command::VerifyThm2 => verify(LimitModel::Oscillatory { p: C64::new(c.p, 0.0) }, c, &c.eps_grid),
        Command::VerifyThm3 => verify(LimitModel::Airy { p: C64::new(c.p, 0.0) }, c, &c.eta_grid),
        Command::Relations => single(drivers::relations(c.alphas[0], c.energies[0], c.ell, c.tol, c.threshold)),
        Command::SpecfunSelftest => single(drivers::specfun_selftest(20, c.seed)),
    }
}

fn print_checks(checks: &[Check], err: &mut impl Write) {
    for ch in checks {
        let _ = writeln!(
            err,
            "{} {}: value {:.3e}, threshold {:.3e}",
            if ch.pass { "PASS" } else { "FAIL" },
            ch.name,
            ch.value,
            ch.threshold
        );
    }
}

fn partial_marker(path: &PathBuf) -> PathBuf {
    let mut s = path.clone().into_os_string();
    s.push(".partial");
    PathBuf::from(s)
}

/// Executes the command, writes the report and returns the exit status.
pub fn run(c: &RunConfig, stdout: &mut impl Write, stderr: &mut impl Write) -> i32 {
    let outcome = execute(c);
    let written = match &c.output {
        Some(path) => std::fs::File::create(path)
            .map_err(|e| e.to_string())
            .and_then(|f| emit(&outcome.report, c.format, std::io::BufWriter::new(f)).map_err(|e| e.to_string())),
        None => emit(&outcome.report, c.format, &mut *stdout).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write report: {e}");
        return EXIT_IO;
    }
    print_checks(&outcome.report.checks, stderr);
    if let Some(e) = outcome.error {
        let _ = writeln!(stderr, "error: {e}");
        let _ = writeln!(stderr, "partial report: {} row(s) written before the failure", outcome.report.rows.len());
        if let Some(path) = &c.output {
            let _ = std::fs::write(partial_marker(path), format!("{e}\n"));
        }
        return EXIT_NUMERICAL;
    }
    if outcome.report.passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}
