//! Error type shared by every module.

use thiserror::Error;

/// Failures reported by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A series or asymptotic representation could not reach the tolerance.
    #[error("precision error: {0}")]
    Precision(String),
    /// A series was truncated before its tail fell below the tolerance.
    #[error("truncation error: tail {tail:e} exceeds tolerance {tol:e}")]
    Truncation { tail: f64, tol: f64 },
    /// A Frobenius divisor vanished.
    #[error("resonance at (j, m) = ({j}, {m}): divisor {divisor:e}")]
    Resonance { j: usize, m: usize, divisor: f64 },
    /// The ODE stepper could not make progress.
    #[error("integration failure: {0}")]
    Integration(String),
    /// A root search failed to bracket or converge.
    #[error("search error: {0}")]
    Search(String),
    /// A path or point conflicts with the cut geometry.
    #[error("geometry error: {0}")]
    Geometry(String),
    /// Invalid configuration.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
