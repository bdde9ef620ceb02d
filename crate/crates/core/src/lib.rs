//! Spectral determinants, Stokes multipliers and their zeros for the
//! anharmonic oscillator
//!
//! ```text
//! ψ'' = (x^{2α} + ℓ(ℓ+1)/x² − E) ψ,   x on the universal cover of ℂ*,
//! ```
//!
//! together with the large-degree limit models (Bessel, oscillatory,
//! Airy), the ODE/IM functional relations, and the special functions they
//! rely on.
//!
//! The crate is organised bottom-up:
//!
//! | module | contents |
//! |--------|----------|
//! | [`cover`] | points on the universal cover of ℂ* |
//! | [`specfun`] | Γ, Bessel J/Y/H, modified Bessel I/K, Airy, zeros |
//! | [`oscillator`] | parameter records, potentials, sectors, rescaling |
//! | [`ode`] | adaptive Dormand–Prince stepper with an exponent ledger |
//! | [`frobenius`] | Frobenius solutions χ± at the origin |
//! | [`sibuya`] | subdominant solutions ψ_k at infinity |
//! | [`determinants`] | Q±, σ_k, TQ / quantum-Wronskian / Bethe residuals |
//! | [`asymptotics`] | closed-form limit models and error tables |
//! | [`wkb`] | turning points, action integrals, WKB approximants |
//! | [`roots`] | zero scanning, counting, density law |
//! | [`drivers`] | experiment drivers shared by the CLI and the test suites |

#![allow(clippy::too_many_arguments)]

pub mod asymptotics;
pub mod cover;
pub mod determinants;
pub mod drivers;
pub mod error;
pub mod frobenius;
pub mod ode;
pub mod oscillator;
pub mod roots;
pub mod sibuya;
pub mod specfun;
pub mod wkb;

pub use cover::CoverPoint;
pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use oscillator::{Branch, OscillatorParams, RescaledParams};
