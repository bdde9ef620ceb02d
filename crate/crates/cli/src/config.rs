//! Run configuration from command-line flags and an optional flat
//! `key=value` file.  Flags override file entries; unknown keys are
//! rejected.

use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};
use specdet::{Branch, C64};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    /// Help or version text requested.
    #[error("{0}")]
    Info(String),
    #[error("{0}")]
    Usage(String),
    #[error("config file {path}: {msg}")]
    File { path: String, msg: String },
    #[error("invalid value for `{key}`: {msg}")]
    Value { key: String, msg: String },
    #[error("missing required `--{0}`")]
    Missing(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    EvalQ,
    EvalStokes,
    Zeros,
    Density,
    AiryZeros,
    VerifyThm1,
    VerifyThm2,
    VerifyThm3,
    Relations,
    SpecfunSelftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "specdet", version, about = "Spectral determinants of the anharmonic oscillator x^{2a} + l(l+1)/x^2 - E")]
pub struct Cli {
    pub command: Command,
    /// Flat `key=value` file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Degree(s) α: `8,16,32` or `lo:hi:n`.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Energy grid: comma list of (complex) values or `lo:hi:n`.
    #[arg(long = "E")]
    pub e: Option<String>,
    /// Angular momentum ℓ (complex allowed).
    #[arg(long)]
    pub ell: Option<String>,
    /// Frobenius branch: plus | minus.
    #[arg(long)]
    pub branch: Option<String>,
    /// Stokes index k, |k| ≤ 1.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Upper end of the energy scan for zeros
    #[arg(long)]
    pub emax: Option<String>,
    /// Large-degree parameter p, with ℓ + ½ = 2p(α+1)
    #[arg(long)]
    pub p: Option<String>,
    /// Interval in ε: two numbers.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    pub interval: Option<Vec<String>>,
    /// ε grid for verify-thm2.
    #[arg(long)]
    pub eps: Option<String>,
    /// η grid for verify-thm3.
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<String>,
    /// Number of zeros for airy-zeros.
    #[arg(long)]
    pub count: Option<String>,
    /// ODE/series tolerance.
    #[arg(long)]
    pub tol: Option<String>,
    /// Root refinement tolerance.
    #[arg(long = "root-tol")]
    pub root_tol: Option<String>,
    /// Relative threshold for the relations checks.
    #[arg(long)]
    pub threshold: Option<String>,
    /// Seed for the randomized self-test points.
    #[arg(long)]
    pub seed: Option<String>,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub output: Option<String>,
    /// Report format: csv | json
    #[arg(long)]
    pub format: Option<String>,
}

const KEYS: [&str; 17] = [
    "alpha", "E", "ell", "branch", "k", "emax", "p", "interval", "eps", "eta", "count", "tol", "root-tol", "threshold",
    "seed", "output", "format",
];

/// Validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub alphas: Vec<f64>,
    pub energies: Vec<C64>,
    pub ell: C64,
    pub branch: Branch,
    pub k: i64,
    pub emax: Option<f64>,
    pub p: f64,
    pub interval: Option<(f64, f64)>,
    pub eps_grid: Vec<f64>,
    pub eta_grid: Vec<f64>,
    pub count: usize,
    pub tol: f64,
    pub root_tol: f64,
    pub threshold: f64,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
}

/// Parses a flat `key=value` file (`#` starts a comment).
pub fn parse_config_file(text: &str, path: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::File {
            path: path.to_string(),
            msg: format!("line {}: expected key=value", n + 1),
        })?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            return Err(ConfigError::File { path: path.to_string(), msg: format!("line {}: unknown key `{k}`", n + 1) });
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(ConfigError::File { path: path.to_string(), msg: format!("line {}: duplicate key `{k}`", n + 1) });
        }
    }
    Ok(out)
}

fn value_err(key: &str, msg: impl Into<String>) -> ConfigError {
    ConfigError::Value { key: key.to_string(), msg: msg.into() }
}

fn parse_f64(key: &str, s: &str) -> Result<f64, ConfigError> {
    let v: f64 = s.trim().parse().map_err(|_| value_err(key, format!("`{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(value_err(key, "must be finite"));
    }
    Ok(v)
}

fn parse_c64(key: &str, s: &str) -> Result<C64, ConfigError> {
    let z = C64::from_str(s.trim()).map_err(|_| value_err(key, format!("`{s}` is not a complex number")))?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(value_err(key, "must be finite"));
    }
    Ok(z)
}

/// `lo:hi:n` (inclusive, `n ≥ 1`) or a comma list.
fn parse_real_grid(key: &str, s: &str) -> Result<Vec<f64>, ConfigError> {
    let parts: Vec<&str> = s.split(':').collect();
    let out = if parts.len() == 3 {
        let lo = parse_f64(key, parts[0])?;
        let hi = parse_f64(key, parts[1])?;
        let n: usize = parts[2].trim().parse().map_err(|_| value_err(key, "grid size must be a positive integer"))?;
        match n {
            0 => Vec::new(),
            1 => vec![lo],
            _ => (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect(),
        }
    } else {
        s.split(',').map(|t| parse_f64(key, t)).collect::<Result<_, _>>()?
    };
    if out.is_empty() {
        return Err(value_err(key, "grid must be nonempty"));
    }
    Ok(out)
}

fn parse_complex_grid(key: &str, s: &str) -> Result<Vec<C64>, ConfigError> {
    if s.contains(':') {
        return Ok(parse_real_grid(key, s)?.into_iter().map(|x| C64::new(x, 0.0)).collect());
    }
    let out: Vec<C64> = s.split(',').map(|t| parse_c64(key, t)).collect::<Result<_, _>>()?;
    if out.is_empty() {
        return Err(value_err(key, "grid must be nonempty"));
    }
    Ok(out)
}

fn parse_tol(key: &str, s: &str) -> Result<f64, ConfigError> {
    let t = parse_f64(key, s)?;
    if !(t > 0.0 && t <= 1e-2) {
        return Err(value_err(key, "tolerance must lie in (0, 1e-2]"));
    }
    Ok(t)
}

/// Merges flags over file entries and validates the result for the
/// command.
pub fn parse_config(cli: &Cli, file: Option<&BTreeMap<String, String>>) -> Result<RunConfig, ConfigError> {
    let mut m: BTreeMap<String, String> = file.cloned().unwrap_or_default();
    let flags: [(&str, Option<String>); 17] = [
        ("alpha", cli.alpha.clone()),
        ("E", cli.e.clone()),
        ("ell", cli.ell.clone()),
        ("branch", cli.branch.clone()),
        ("k", cli.k.clone()),
        ("emax", cli.emax.clone()),
        ("p", cli.p.clone()),
        ("interval", cli.interval.as_ref().map(|v| v.join(","))),
        ("eps", cli.eps.clone()),
        ("eta", cli.eta.clone()),
        ("count", cli.count.clone()),
        ("tol", cli.tol.clone()),
        ("root-tol", cli.root_tol.clone()),
        ("threshold", cli.threshold.clone()),
        ("seed", cli.seed.clone()),
        ("output", cli.output.clone()),
        ("format", cli.format.clone()),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            m.insert(k.to_string(), v);
        }
    }
    let get = |k: &str| m.get(k).map(|s| s.as_str());
    let cmd = cli.command;
    use Command::*;

    let alphas = match get("alpha") {
        Some(s) => parse_real_grid("alpha", s)?,
        None if cmd == SpecfunSelftest => Vec::new(),
        None => return Err(ConfigError::Missing("alpha")),
    };
    if alphas.iter().any(|&a| !(a > 0.0)) {
        return Err(value_err("alpha", "must be positive"));
    }
    if matches!(cmd, Zeros | Density | AiryZeros | Relations) && alphas.len() != 1 {
        return Err(value_err("alpha", "this command takes a single alpha"));
    }
    let energies = match (get("E"), cmd) {
        (Some(s), _) => parse_complex_grid("E", s)?,
        (None, VerifyThm1) => parse_complex_grid("E", "0:40:81")?,
        (None, EvalQ | EvalStokes | Relations) => return Err(ConfigError::Missing("E")),
        (None, _) => Vec::new(),
    };
    if cmd == Relations && energies.len() != 1 {
        return Err(value_err("E", "relations takes a single energy"));
    }
    let ell = get("ell").map(|s| parse_c64("ell", s)).transpose()?.unwrap_or_default();
    if !(ell.re > -0.5) {
        return Err(value_err("ell", "Re(ell) must exceed -1/2"));
    }
    if matches!(cmd, Zeros | VerifyThm1) && ell.im != 0.0 {
        return Err(value_err("ell", "must be real for this command"));
    }
    let branch = match get("branch") {
        None | Some("plus") => Branch::Plus,
        Some("minus") => Branch::Minus,
        Some(s) => return Err(value_err("branch", format!("`{s}` is not plus or minus"))),
    };
    let k = match get("k") {
        None => 0,
        Some(s) => s.trim().parse::<i64>().map_err(|_| value_err("k", "must be an integer"))?,
    };
    if k.abs() > 1 {
        return Err(value_err("k", "|k| must be at most 1"));
    }
    let emax = get("emax").map(|s| parse_f64("emax", s)).transpose()?;
    if cmd == Zeros && emax.is_none() {
        return Err(ConfigError::Missing("emax"));
    }
    let p = match get("p") {
        Some(s) => parse_f64("p", s)?,
        None if matches!(cmd, Density | AiryZeros) => return Err(ConfigError::Missing("p")),
        None => 1.0,
    };
    if !(p > 0.0) {
        return Err(value_err("p", "must be positive"));
    }
    let interval = match get("interval") {
        Some(s) => {
            let v = s.split(',').map(|t| parse_f64("interval", t)).collect::<Result<Vec<_>, _>>()?;
            if v.len() != 2 || !(v[0] > 1.0) || !(v[1] >= v[0]) {
                return Err(value_err("interval", "expected LO HI with 1 < LO <= HI"));
            }
            Some((v[0], v[1]))
        }
        None if cmd == Density => return Err(ConfigError::Missing("interval")),
        None => None,
    };
    let eps_grid = match get("eps") {
        Some(s) => parse_real_grid("eps", s)?,
        None if cmd == VerifyThm2 => parse_real_grid("eps", "1.2:2.0:41")?,
        None => Vec::new(),
    };
    if eps_grid.iter().any(|&e| !(e > 1.0)) {
        return Err(value_err("eps", "grid values must exceed 1"));
    }
    let eta_grid = match get("eta") {
        Some(s) => parse_real_grid("eta", s)?,
        None if cmd == VerifyThm3 => parse_real_grid("eta", "0.5:3.0:26")?,
        None => Vec::new(),
    };
    if eta_grid.iter().any(|&e| e == 0.0) {
        return Err(value_err("eta", "grid must avoid 0"));
    }
    let count = match get("count") {
        None => 3,
        Some(s) => s.trim().parse::<usize>().map_err(|_| value_err("count", "must be a nonnegative integer"))?,
    };
    let tol = get("tol").map(|s| parse_tol("tol", s)).transpose()?.unwrap_or(1e-9);
    let root_tol = get("root-tol").map(|s| parse_tol("root-tol", s)).transpose()?.unwrap_or(1e-8);
    let threshold = get("threshold").map(|s| parse_f64("threshold", s)).transpose()?.unwrap_or(1e-8);
    let seed = match get("seed") {
        None => 20240916,
        Some(s) => s.trim().parse::<u64>().map_err(|_| value_err("seed", "must be a nonnegative integer"))?,
    };
    let output = get("output").map(PathBuf::from);
    let format = match get("format") {
        None => Format::Csv,
        Some(s) => Format::from_str(s, true).map_err(|_| value_err("format", format!("`{s}` is not csv or json")))?,
    };
    Ok(RunConfig {
        command: cmd,
        alphas,
        energies,
        ell,
        branch,
        k,
        emax,
        p,
        interval,
        eps_grid,
        eta_grid,
        count,
        tol,
        root_tol,
        threshold,
        seed,
        output,
        format,
    })
}

/// Parses `argv`, reads the config file if one is named, and merges.
pub fn load(argv: &[String]) -> Result<RunConfig, ConfigError> {
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ConfigError::Info(e.render().to_string()),
        _ => ConfigError::Usage(e.render().to_string()),
    })?;
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError::File {
                path: path.display().to_string(),
                msg: e.to_string(),
            })?;
            Some(parse_config_file(&text, &path.display().to_string())?)
        }
        None => None,
    };
    parse_config(&cli, file.as_ref())
}
