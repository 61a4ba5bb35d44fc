//! Monostable reaction term `F` and its first two derivatives.
//!
//! The admissible class is `F(0) = F(1) = 0`, `F > 0` on `(0, 1)` and
//! `-F'' >= alpha > 0` on `[0, 1]`. The logistic law `r rho (1 - rho)` is the
//! built-in case; any other law can be supplied as a closure triple.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Values within this distance outside `[0, 1]` are clamped instead of rejected.
pub const DOMAIN_SLACK: f64 = 1e-12;

type Scalar = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum GrowthKind {
    Logistic { rate: f64 },
    Analytic { f: Scalar, df: Scalar, d2f: Scalar },
}

impl fmt::Debug for GrowthKind {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthKind::Logistic { rate } => write!(fm, "Logistic {{ rate: {rate} }}"),
            GrowthKind::Analytic { .. } => write!(fm, "Analytic {{ .. }}"),
        }
    }
}

/// Which derivative [`GrowthFunction::evaluate`] returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivative {
    Value,
    First,
    Second,
}

impl TryFrom<u8> for Derivative {
    type Error = Error;

    fn try_from(order: u8) -> Result<Self> {
        match order {
            0 => Ok(Derivative::Value),
            1 => Ok(Derivative::First),
            2 => Ok(Derivative::Second),
            _ => Err(Error::InvalidParameter {
                name: "order",
                reason: format!("derivative order must be 0, 1 or 2, got {order}"),
            }),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GrowthFunction {
    kind: GrowthKind,
    alpha: f64,
    fprime0: f64,
    fprime1: f64,
}

const ALPHA_SAMPLES: usize = 1001;

impl GrowthFunction {
    pub fn logistic(rate: f64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::InvalidParameter {
                name: "rate",
                reason: format!("logistic rate must be positive and finite, got {rate}"),
            });
        }
        Ok(Self {
            kind: GrowthKind::Logistic { rate },
            alpha: 2.0 * rate,
            fprime0: rate,
            fprime1: -rate,
        })
    }

    /// User-supplied law. `alpha` is estimated as the minimum of `-F''` on a
    /// uniform sample of `[0, 1]`; call [`GrowthFunction::validate`] to check
    /// the monostable assumptions.
    pub fn analytic<F, D, D2>(f: F, df: D, d2f: D2) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
        D2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let alpha = uniform(ALPHA_SAMPLES)
            .map(|rho| -d2f(rho))
            .fold(f64::INFINITY, f64::min);
        let fprime0 = df(0.0);
        let fprime1 = df(1.0);
        Self {
            kind: GrowthKind::Analytic {
                f: Arc::new(f),
                df: Arc::new(df),
                d2f: Arc::new(d2f),
            },
            alpha,
            fprime0,
            fprime1,
        }
    }

    pub fn kind(&self) -> &GrowthKind {
        &self.kind
    }

    /// Coercivity constant `inf (-F'')`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn fprime0(&self) -> f64 {
        self.fprime0
    }

    pub fn fprime1(&self) -> f64 {
        self.fprime1
    }

    /// `F(rho)` without domain checks. Solvers call this with densities that
    /// may leave `[0, 1]` slightly.
    #[inline]
    pub fn f(&self, rho: f64) -> f64 {
        match &self.kind {
            GrowthKind::Logistic { rate } => rate * rho * (1.0 - rho),
            GrowthKind::Analytic { f, .. } => f(rho),
        }
    }

    #[inline]
    pub fn df(&self, rho: f64) -> f64 {
        match &self.kind {
            GrowthKind::Logistic { rate } => rate * (1.0 - 2.0 * rho),
            GrowthKind::Analytic { df, .. } => df(rho),
        }
    }

    #[inline]
    pub fn d2f(&self, rho: f64) -> f64 {
        match &self.kind {
            GrowthKind::Logistic { rate } => -2.0 * rate,
            GrowthKind::Analytic { d2f, .. } => d2f(rho),
        }
    }

    /// Checked evaluation on `[0, 1]`; drift up to [`DOMAIN_SLACK`] is clamped.
    pub fn evaluate(&self, rho: f64, order: Derivative) -> Result<f64> {
        if !rho.is_finite() || !(-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&rho) {
            return Err(Error::Domain { value: rho });
        }
        let rho = rho.clamp(0.0, 1.0);
        Ok(match order {
            Derivative::Value => self.f(rho),
            Derivative::First => self.df(rho),
            Derivative::Second => self.d2f(rho),
        })
    }

    /// Checks the monostable assumptions on `samples` uniform points of `[0, 1]`.
    pub fn validate(&self, samples: usize) -> Result<ValidationReport> {
        if samples < 3 {
            return Err(Error::InvalidParameter {
                name: "samples",
                reason: format!("need at least 3 samples, got {samples}"),
            });
        }
        let grid: Vec<f64> = uniform(samples).collect();
        let mut checks = Vec::with_capacity(5);

        let (f0, f1) = (self.f(0.0), self.f(1.0));
        checks.push(Check::new(
            "roots",
            f0.abs() <= 1e-14 && f1.abs() <= 1e-14,
            format!("F(0) = {f0:e}, F(1) = {f1:e}"),
        ));

        let min_interior = grid[1..samples - 1]
            .iter()
            .map(|&r| self.f(r))
            .fold(f64::INFINITY, f64::min);
        checks.push(Check::new(
            "positivity",
            min_interior > 0.0,
            format!("min F on interior samples = {min_interior:e}"),
        ));

        let alpha = grid.iter().map(|&r| -self.d2f(r)).fold(f64::INFINITY, f64::min);
        checks.push(Check::new(
            "concavity",
            alpha > 0.0,
            format!("min -F'' = {alpha}"),
        ));

        let (d0, d1) = (self.df(0.0), self.df(1.0));
        checks.push(Check::new("unstable zero", d0 > 0.0, format!("F'(0) = {d0}")));
        checks.push(Check::new("stable one", d1 < 0.0, format!("F'(1) = {d1}")));

        Ok(ValidationReport {
            alpha,
            fprime0: d0,
            fprime1: d1,
            checks,
        })
    }
}

fn uniform(samples: usize) -> impl Iterator<Item = f64> {
    let last = (samples - 1) as f64;
    (0..samples).map(move |i| i as f64 / last)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// Sampled estimate of `inf (-F'')`.
    pub alpha: f64,
    pub fprime0: f64,
    pub fprime1: f64,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn logistic_values() {
        let g = GrowthFunction::logistic(1.0).unwrap();
        assert_eq!(g.evaluate(0.5, Derivative::Value).unwrap(), 0.25);
        assert_eq!(g.evaluate(0.0, Derivative::First).unwrap(), 1.0);
        for rho in [0.0, 0.3, 1.0] {
            assert_eq!(g.evaluate(rho, Derivative::Second).unwrap(), -2.0);
        }
    }

    #[test]
    fn domain_slack_is_clamped() {
        let g = GrowthFunction::logistic(1.0).unwrap();
        assert_eq!(g.evaluate(-5e-13, Derivative::Value).unwrap(), 0.0);
        assert_eq!(g.evaluate(1.0 + 5e-13, Derivative::First).unwrap(), -1.0);
        assert!(matches!(
            g.evaluate(-1e-9, Derivative::Value),
            Err(Error::Domain { .. })
        ));
        assert!(g.evaluate(1.1, Derivative::Value).is_err());
        assert!(g.evaluate(f64::NAN, Derivative::Value).is_err());
    }

    #[test]
    fn derivative_order_parsing() {
        assert_eq!(Derivative::try_from(2).unwrap(), Derivative::Second);
        assert!(Derivative::try_from(3).is_err());
    }

    #[test]
    fn validate_logistic() {
        let g = GrowthFunction::logistic(1.0).unwrap();
        let rep = g.validate(101).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.alpha, 2.0);

        let g4 = GrowthFunction::logistic(4.0).unwrap();
        let rep = g4.validate(101).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.alpha, 8.0);
        assert_eq!(rep.fprime0, 4.0);
    }

    #[test]
    fn degenerate_kpp_fails() {
        let g = GrowthFunction::analytic(
            |r| r * r * (1.0 - r),
            |r| 2.0 * r - 3.0 * r * r,
            |r| 2.0 - 6.0 * r,
        );
        let rep = g.validate(101).unwrap();
        assert!(!rep.passed());
        assert!(!rep.check("unstable zero").unwrap().passed);
    }

    #[test]
    fn analytic_matches_logistic() {
        let g = GrowthFunction::analytic(|r| r * (1.0 - r), |r| 1.0 - 2.0 * r, |_| -2.0);
        assert!(g.validate(51).unwrap().passed());
        assert_eq!(g.alpha(), 2.0);
        assert_eq!(g.fprime0(), 1.0);
        assert_eq!(g.fprime1(), -1.0);
    }

    #[test]
    fn too_few_samples() {
        let g = GrowthFunction::logistic(1.0).unwrap();
        assert!(g.validate(2).is_err());
        assert!(GrowthFunction::logistic(-1.0).is_err());
    }

    #[test]
    fn finite_difference_consistency() {
        let g = GrowthFunction::analytic(
            |r: f64| r * (1.0 - r) * (1.0 + 0.5 * r),
            |r: f64| 1.0 - r - 1.5 * r * r,
            |r: f64| -1.0 - 3.0 * r,
        );
        for h in [1e-3, 1e-4] {
            for i in 1..=20 {
                let rho = i as f64 / 21.0;
                let fd = (g.f(rho + h) - g.f(rho - h)) / (2.0 * h);
                assert!((fd - g.df(rho)).abs() <= 2.0 * h * h, "F' at {rho}");
                let fd2 = (g.df(rho + h) - g.df(rho - h)) / (2.0 * h);
                assert!((fd2 - g.d2f(rho)).abs() <= 2.0 * h * h, "F'' at {rho}");
            }
        }
    }

    proptest! {
        #[test]
        fn logistic_closed_forms(rate in 0.01f64..50.0, rho in 0.0f64..=1.0) {
            let g = GrowthFunction::logistic(rate).unwrap();
            prop_assert_eq!(g.evaluate(rho, Derivative::Value).unwrap(), rate * rho * (1.0 - rho));
            prop_assert_eq!(g.evaluate(rho, Derivative::First).unwrap(), rate * (1.0 - 2.0 * rho));
            prop_assert_eq!(g.evaluate(rho, Derivative::Second).unwrap(), -2.0 * rate);
        }

        #[test]
        fn logistic_always_valid(rate in 0.01f64..50.0) {
            let g = GrowthFunction::logistic(rate).unwrap();
            let rep = g.validate(33).unwrap();
            prop_assert!(rep.passed());
            prop_assert_eq!(rep.alpha, 2.0 * rate);
        }
    }
}
