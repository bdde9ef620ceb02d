//! Report emission as CSV (header row always present) or a JSON array of
//! row objects.  Floats are written with 17 significant digits.

use specdet::drivers::{Cell, Report};
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("non-finite value in column `{0}`")]
    NonFinite(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// `x` with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn cell_text(c: &Cell) -> String {
    match c {
        Cell::Int(i) => i.to_string(),
        Cell::Float(x) => format_float(*x),
        Cell::Text(s) => s.clone(),
    }
}

fn check_finite(report: &Report) -> Result<(), EmitError> {
    for row in &report.rows {
        for (c, name) in row.iter().zip(&report.columns) {
            if let Cell::Float(x) = c {
                if !x.is_finite() {
                    return Err(EmitError::NonFinite(name.clone()));
                }
            }
        }
    }
    Ok(())
}

pub fn write_csv(report: &Report, out: impl Write) -> Result<(), EmitError> {
    check_finite(report)?;
    let mut w = csv::WriterBuilder::new().quote_style(csv::QuoteStyle::Necessary).from_writer(out);
    w.write_record(&report.columns)?;
    for row in &report.rows {
        w.write_record(row.iter().map(cell_text))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json(report: &Report, mut out: impl Write) -> Result<(), EmitError> {
    check_finite(report)?;
    let key = |s: &str| serde_json::Value::String(s.to_string()).to_string();
    write!(out, "[")?;
    for (i, row) in report.rows.iter().enumerate() {
        write!(out, "{}\n  {{", if i == 0 { "" } else { "," })?;
        for (j, (c, name)) in row.iter().zip(&report.columns).enumerate() {
            let v = match c {
                Cell::Text(s) => serde_json::Value::String(s.clone()).to_string(),
                other => cell_text(other),
            };
            write!(out, "{}{}: {}", if j == 0 { "" } else { ", " }, key(name), v)?;
        }
        write!(out, "}}")?;
    }
    writeln!(out, "{}]", if report.rows.is_empty() { "" } else { "\n" })?;
    Ok(())
}

pub fn emit(report: &Report, format: crate::config::Format, out: impl Write) -> Result<(), EmitError> {
    match format {
        crate::config::Format::Csv => write_csv(report, out),
        crate::config::Format::Json => write_json(report, out),
    }
}
