use specdet::drivers::{Cell, Report};
use specdet_cli::config::{parse_config, parse_config_file, Cli, ConfigError, Format};
use specdet_cli::emit::{format_float, write_csv, write_json};
use clap::Parser;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_specdet"))
}

fn run_ok(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("spawn");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn sample_report() -> Report {
    Report {
        columns: vec!["name".into(), "n".into(), "x".into()],
        rows: vec![
            vec![Cell::Text("a, \"quoted\"".into()), Cell::Int(3), Cell::Float(0.1)],
            vec![Cell::Text("b".into()), Cell::Int(-1), Cell::Float(-2.5e-300)],
            vec![Cell::Text("c".into()), Cell::Int(0), Cell::Float(std::f64::consts::PI)],
        ],
        checks: Vec::new(),
    }
}

#[test]
fn zeros_command_reproduces_the_harmonic_spectrum() {
    let (code, out, _) = run_ok(&["zeros", "--alpha", "1", "--ell", "0", "--emax", "13"]);
    assert_eq!(code, 0);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["index", "location", "bracket_lo", "bracket_hi", "residual"]);
    let locs: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(locs.len(), 3);
    for (x, want) in locs.iter().zip([3.0, 7.0, 11.0]) {
        assert!((x - want).abs() < 1e-6, "{x}");
    }
}

#[test]
fn relations_command_passes() {
    let (code, out, err) = run_ok(&["relations", "--alpha", "3", "--E", "1", "--ell", "0.2"]);
    assert_eq!(code, 0, "{err}");
    let (_, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 2);
    for r in rows {
        let rel: f64 = r[9].parse().unwrap();
        assert!(rel < 1e-8, "{r:?}");
    }
}

#[test]
fn relations_accepts_complex_energy() {
    let (code, _, err) = run_ok(&["relations", "--alpha", "5", "--E", "1+1i", "--ell", "0.4"]);
    assert_eq!(code, 0, "{err}");
}

#[test]
fn density_command_reports_count_and_integral() {
    let (code, out, err) = run_ok(&["density", "--alpha", "50", "--p", "1", "--interval", "1.2", "2.0"]);
    let (header, rows) = csv_rows(&out);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let integral: f64 = rows[0][col("integral")].parse().unwrap();
    assert!((integral - 0.38656).abs() < 1e-3);
    let n: usize = rows[0][col("count")].parse().unwrap();
    let fine: usize = rows[0][col("count_refined_grid")].parse().unwrap();
    assert_eq!(n, fine);
    // exit status follows the density check
    let within = (n as f64 / 51.0 - integral).abs() <= 1.0 / 51.0;
    assert_eq!(code, if within { 0 } else { 1 }, "{err}");
}

#[test]
fn missing_alpha_is_a_usage_error() {
    let (code, _, err) = run_ok(&["zeros", "--emax", "13"]);
    assert_eq!(code, 2);
    assert!(err.contains("--alpha"));
}

#[test]
fn format_values() {
    let (code, out, _) = run_ok(&["zeros", "--alpha", "1", "--emax", "4", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    let (code, _, err) = run_ok(&["zeros", "--alpha", "1", "--emax", "4", "--format", "xml"]);
    assert_eq!(code, 2);
    assert!(err.contains("format"));
}

#[test]
fn unknown_command_is_rejected() {
    let (code, _, _) = run_ok(&["frobnicate", "--alpha", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn flags_override_file_entries() {
    let file = parse_config_file("# settings\nalpha = 1\ntol=1e-6\nemax=13 # upper\n", "f").unwrap();
    let cli = Cli::try_parse_from(["specdet", "zeros", "--tol", "1e-9"]).unwrap();
    let c = parse_config(&cli, Some(&file)).unwrap();
    assert_eq!(c.tol, 1e-9);
    assert_eq!(c.alphas, vec![1.0]);
    assert_eq!(c.emax, Some(13.0));
    let cli = Cli::try_parse_from(["specdet", "zeros"]).unwrap();
    assert_eq!(parse_config(&cli, Some(&file)).unwrap().tol, 1e-6);
}

#[test]
fn config_file_errors() {
    assert!(matches!(parse_config_file("colour=blue\n", "f"), Err(ConfigError::File { .. })));
    assert!(matches!(parse_config_file("alpha 3\n", "f"), Err(ConfigError::File { .. })));
    assert!(matches!(parse_config_file("alpha=3\nalpha=4\n", "f"), Err(ConfigError::File { .. })));
    let file = parse_config_file("format=xml\n", "f").unwrap();
    let cli = Cli::try_parse_from(["specdet", "zeros", "--alpha", "1", "--emax", "3"]).unwrap();
    assert!(matches!(parse_config(&cli, Some(&file)), Err(ConfigError::Value { .. })));
    let cli = Cli::try_parse_from(["specdet", "zeros", "--alpha", "1", "--emax", "3", "--tol", "0.5"]).unwrap();
    assert!(matches!(parse_config(&cli, None), Err(ConfigError::Value { .. })));
    let cli = Cli::try_parse_from(["specdet", "zeros", "--alpha", "1", "--emax", "3", "--format", "JSON"]).unwrap();
    assert_eq!(parse_config(&cli, None).unwrap().format, Format::Json);
}

#[test]
fn config_file_from_the_command_line() {
    let dir = std::env::temp_dir().join(format!("specdet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.cfg");
    std::fs::write(&path, "alpha=1\nemax=13\ntol=1e-6\n").unwrap();
    let out = dir.join("zeros.json");
    let (code, _, err) = run_ok(&[
        "zeros",
        "--config",
        path.to_str().unwrap(),
        "--format",
        "json",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn empty_report_is_header_only_csv() {
    let r = Report { columns: vec!["index".into(), "location".into()], rows: Vec::new(), checks: Vec::new() };
    let mut buf = Vec::new();
    write_csv(&r, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), "index,location\n");
    let mut buf = Vec::new();
    write_json(&r, &mut buf).unwrap();
    assert_eq!(serde_json::from_slice::<serde_json::Value>(&buf).unwrap(), serde_json::json!([]));
}

#[test]
fn json_round_trip_is_exact() {
    let r = sample_report();
    let mut buf = Vec::new();
    write_json(&r, &mut buf).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    for (row, obj) in r.rows.iter().zip(v.as_array().unwrap()) {
        for (cell, name) in row.iter().zip(&r.columns) {
            let got = &obj[name.as_str()];
            match cell {
                Cell::Text(s) => assert_eq!(got.as_str().unwrap(), s),
                Cell::Int(i) => assert_eq!(got.as_i64().unwrap(), *i),
                Cell::Float(x) => assert_eq!(got.as_f64().unwrap().to_bits(), x.to_bits()),
            }
        }
    }
}

#[test]
fn csv_and_json_carry_identical_numbers() {
    let r = sample_report();
    let mut c = Vec::new();
    write_csv(&r, &mut c).unwrap();
    let (header, rows) = csv_rows(std::str::from_utf8(&c).unwrap());
    assert_eq!(header, r.columns);
    assert_eq!(rows[0][0], "a, \"quoted\"");
    let mut j = Vec::new();
    write_json(&r, &mut j).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&j).unwrap();
    for (row, obj) in rows.iter().zip(v.as_array().unwrap()) {
        let x: f64 = row[2].parse().unwrap();
        assert_eq!(x.to_bits(), obj["x"].as_f64().unwrap().to_bits());
    }
    assert_eq!(rows[2][2], format_float(std::f64::consts::PI));
    assert_eq!(format_float(std::f64::consts::PI), "3.1415926535897931e0");
}

#[test]
fn non_finite_values_are_rejected() {
    let r = Report { columns: vec!["x".into()], rows: vec![vec![Cell::Float(f64::NAN)]], checks: Vec::new() };
    assert!(write_csv(&r, Vec::new()).is_err());
    assert!(write_json(&r, Vec::new()).is_err());
}

#[test]
fn reports_are_byte_identical_across_thread_counts() {
    let args = ["eval-q", "--alpha", "2,3", "--E", "0:6:7", "--ell", "0.3"];
    let a = bin().args(args).env("SPECDET_THREADS", "1").output().unwrap();
    let b = bin().args(args).env("SPECDET_THREADS", "4").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(csv_rows(std::str::from_utf8(&a.stdout).unwrap()).1.len(), 14);
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let out = bin().args(["specfun-selftest"]).env("SPECDET_THREADS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn selftest_command_passes() {
    let (code, out, err) = run_ok(&["specfun-selftest"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.lines().count() >= 8);
}

#[test]
fn numerical_failure_flags_a_partial_report() {
    let dir = std::env::temp_dir().join(format!("specdet-partial-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("q.csv");
    // ℓ = 0.5 at α = 3 is resonant for χ₋
    let (code, _, err) = run_ok(&[
        "eval-q",
        "--alpha",
        "2,3",
        "--E",
        "1",
        "--ell",
        "0.5",
        "--branch",
        "minus",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("partial report"));
    let mut marker = out.clone().into_os_string();
    marker.push(".partial");
    assert!(std::path::Path::new(&marker).exists());
    std::fs::remove_dir_all(&dir).ok();
}
