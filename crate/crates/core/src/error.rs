use thiserror::Error;

use crate::dispersion::Regime;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("value {value} outside the domain [0, 1] of the growth function")]
    Domain { value: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("characteristic quadratic is degenerate (|eps^2 s^2 - 1| = {leading:e})")]
    DegenerateQuadratic { leading: f64 },

    #[error("operation requires {expected} regime, got {actual:?}")]
    Regime { expected: &'static str, actual: Regime },

    #[error("speed {speed} not admissible: {reason}")]
    Speed { speed: f64, reason: String },

    #[error("weight slope is singular at nu = {nu:e}")]
    SingularWeight { nu: f64 },

    #[error("no monotone front with speed {speed} (discriminant at 0: {discriminant:e}): {detail}")]
    NoMonotoneFront { speed: f64, discriminant: f64, detail: String },

    #[error("ODE integration failed: {0}")]
    Integration(String),

    #[error("event detection failed: {0}")]
    Event(String),

    #[error("orbit left the trapping region at v = {v}: P = {p}, bound = {bound}")]
    Trapping { v: f64, p: f64, bound: f64 },

    #[error("CFL violation: dt = {dt} must be below {limit}")]
    Cfl { dt: f64, limit: f64 },

    #[error("field never crosses level {level}")]
    NoCrossing { level: f64 },

    #[error("need at least {needed} snapshots after discarding, got {got}")]
    InsufficientSnapshots { needed: usize, got: usize },

    #[error("no developed front: {0}")]
    NoFront(String),

    #[error("length mismatch: {0}")]
    Shape(String),

    #[error("config error at line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    #[error("invalid config field `{field}`: {message}")]
    ConfigValue { field: String, message: String },

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Validation-class errors map to exit code 1, numerical failures to 2.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::ConfigParse { .. }
                | Error::ConfigValue { .. }
                | Error::Regime { .. }
                | Error::Speed { .. }
                | Error::Domain { .. }
                | Error::NoMonotoneFront { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
