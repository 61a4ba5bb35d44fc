//! Traveling fronts of the hyperbolic Fisher-KPP (telegraph reaction-transport) equation
//!
//! `eps^2 rho_tt + (1 - eps^2 F'(rho)) rho_t - rho_xx = F(rho)`.
//!
//! The crate provides:
//! - [`growth`]: the monostable reaction term and its admissibility checks,
//! - [`dispersion`]: closed-form speeds, decay rates, regimes and weights,
//! - [`profile`]: front profiles in the parabolic, sonic, hyperbolic and
//!   supersonic cases,
//! - [`solver`]: the flux-limited two-velocity kinetic scheme, in the lab
//!   frame and linearized in the moving frame,
//! - [`diagnostics`]: front tracking, speed fits, profile comparison and the
//!   weighted energy functionals used for stability checks,
//! - [`cli`]: the experiment driver behind the `hyperkpp` binary.

pub mod diagnostics;
pub mod dispersion;
pub mod error;
pub mod cli;
pub mod growth;
pub mod numeric;
pub mod profile;
pub mod solver;

pub use dispersion::{Regime, WaveParameters};
pub use error::{Error, Result};
pub use growth::{Derivative, GrowthFunction};
