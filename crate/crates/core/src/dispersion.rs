//! Closed-form wave data: regimes, minimal speed, characteristic roots at
//! both ends of a front, the jump height `theta`, and the stability weight slope.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::growth::GrowthFunction;
use crate::numeric::roots::{bisect, quadratic};

/// `|eps^2 F'(0) - 1|` below this counts as the critical regime.
pub const CRITICAL_TOL: f64 = 1e-12;

/// `|eps^2 s^2 - 1|` below this makes the characteristic quadratics degenerate.
pub const DEGENERATE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Parabolic,
    Critical,
    Hyperbolic,
}

pub fn classify(epsilon: f64, g: &GrowthFunction) -> Regime {
    let m = epsilon * epsilon * g.fprime0();
    if (m - 1.0).abs() < CRITICAL_TOL {
        Regime::Critical
    } else if m < 1.0 {
        Regime::Parabolic
    } else {
        Regime::Hyperbolic
    }
}

/// `s*(eps)`: `2 sqrt(F'(0)) / (1 + eps^2 F'(0))` below the transition, `1/eps` above.
pub fn minimal_speed(epsilon: f64, g: &GrowthFunction) -> f64 {
    match classify(epsilon, g) {
        Regime::Parabolic => {
            let d0 = g.fprime0();
            2.0 * d0.sqrt() / (1.0 + epsilon * epsilon * d0)
        }
        Regime::Critical | Regime::Hyperbolic => 1.0 / epsilon,
    }
}

/// Discriminant of the characteristic equation at `nu = 0`.
pub fn discriminant_zero(epsilon: f64, s: f64, g: &GrowthFunction) -> f64 {
    let d0 = g.fprime0();
    let m = epsilon * epsilon * d0 + 1.0;
    m * m * s * s - 4.0 * d0
}

/// Discriminant of the characteristic equation at `nu = 1`.
pub fn discriminant_one(epsilon: f64, s: f64, g: &GrowthFunction) -> f64 {
    let d1 = g.fprime1();
    let m = epsilon * epsilon * d1 + 1.0;
    m * m * s * s - 4.0 * d1
}

/// Coefficients `(a, b, c)` of `a l^2 + b l + c` for the decay rate at `+inf`.
pub fn char_poly_zero(epsilon: f64, s: f64, g: &GrowthFunction) -> (f64, f64, f64) {
    let e2 = epsilon * epsilon;
    (e2 * s * s - 1.0, (1.0 - e2 * g.fprime0()) * s, -g.fprime0())
}

/// Coefficients `(a, b, c)` for the relaxation rate at `-inf`.
pub fn char_poly_one(epsilon: f64, s: f64, g: &GrowthFunction) -> (f64, f64, f64) {
    let e2 = epsilon * epsilon;
    (e2 * s * s - 1.0, -(1.0 - e2 * g.fprime1()) * s, -g.fprime1())
}

fn roots_with(a: f64, b: f64, c: f64, disc: f64) -> Result<[Complex64; 2]> {
    if a.abs() < DEGENERATE_TOL {
        return Err(Error::DegenerateQuadratic { leading: a.abs() });
    }
    // A double root computed in floating point can come out with a
    // discriminant of -1 ulp; snap it to zero.
    let scale = b * b + (4.0 * a * c).abs();
    let disc = if disc < 0.0 && -disc <= 1e-14 * scale { 0.0 } else { disc };
    Ok(quadratic(a, b, c, disc))
}

/// Roots of the characteristic polynomial at `nu = 0`, sorted by real part.
pub fn char_roots_zero(params: &WaveParameters, g: &GrowthFunction) -> Result<[Complex64; 2]> {
    let (a, b, c) = char_poly_zero(params.epsilon, params.s, g);
    roots_with(a, b, c, discriminant_zero(params.epsilon, params.s, g))
}

/// Roots of the characteristic polynomial at `nu = 1`, always real.
pub fn char_roots_one(params: &WaveParameters, g: &GrowthFunction) -> Result<[Complex64; 2]> {
    let (a, b, c) = char_poly_one(params.epsilon, params.s, g);
    roots_with(a, b, c, discriminant_one(params.epsilon, params.s, g))
}

/// The nonzero root `theta` of `eps^2 F(rho) = rho`; zero at the transition.
pub fn theta(epsilon: f64, g: &GrowthFunction) -> Result<f64> {
    let regime = classify(epsilon, g);
    match regime {
        Regime::Parabolic => Err(Error::Regime {
            expected: "critical or hyperbolic",
            actual: regime,
        }),
        Regime::Critical => Ok(0.0),
        Regime::Hyperbolic => {
            let e2 = epsilon * epsilon;
            bisect(|r| e2 * g.f(r) - r, 1e-12, 1.0 - 1e-12, 1e-13, 1e-16)
        }
    }
}

/// Positive root of the supersonic unstable-direction equation at `v = 0`.
pub fn supersonic_slope(epsilon: f64, s: f64, g: &GrowthFunction) -> Result<f64> {
    let e2 = epsilon * epsilon;
    let a = e2 * s * s - 1.0;
    if a <= DEGENERATE_TOL {
        return Err(Error::Speed {
            speed: s,
            reason: format!("supersonic slope needs s > 1/eps = {}", 1.0 / epsilon),
        });
    }
    let d0 = g.fprime0();
    let b = -(e2 * d0 - 1.0) * s;
    let c = -d0;
    let roots = quadratic(a, b, c, b * b - 4.0 * a * c);
    Ok(roots[1].re)
}

/// Parameters of a front: `(eps, s)` and every closed-form quantity derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveParameters {
    pub epsilon: f64,
    pub s: f64,
    pub regime: Regime,
    pub s_star: f64,
    /// Smallest positive real decay rate at `+inf`, if one exists.
    pub lambda: Option<f64>,
    /// Relaxation rate at `-inf` (smallest positive root).
    pub lambda_prime: f64,
    /// Jump height; `None` in the parabolic regime.
    pub theta: Option<f64>,
    /// `eps^2 s / (eps^2 s^2 - 1)`, supersonic speeds only.
    pub k_super: Option<f64>,
}

impl WaveParameters {
    pub fn new(epsilon: f64, s: f64, g: &GrowthFunction) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: format!("must be positive and finite, got {epsilon}"),
            });
        }
        if !(s.is_finite() && s >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "speed",
                reason: format!("must be nonnegative and finite, got {s}"),
            });
        }
        let regime = classify(epsilon, g);
        let s_star = minimal_speed(epsilon, g);
        let e2 = epsilon * epsilon;
        let lead = e2 * s * s - 1.0;

        let lambda = {
            let (a, b, c) = char_poly_zero(epsilon, s, g);
            if a.abs() < DEGENERATE_TOL {
                let r = -c / b;
                (r > 0.0 && r.is_finite()).then_some(r)
            } else {
                let roots = roots_with(a, b, c, discriminant_zero(epsilon, s, g))?;
                roots
                    .iter()
                    .filter(|r| r.im == 0.0 && r.re > 0.0)
                    .map(|r| r.re)
                    .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.min(r))))
            }
        };

        let lambda_prime = {
            let (a, b, c) = char_poly_one(epsilon, s, g);
            if a.abs() < DEGENERATE_TOL {
                -c / b
            } else {
                let roots = roots_with(a, b, c, discriminant_one(epsilon, s, g))?;
                roots
                    .iter()
                    .map(|r| r.re)
                    .filter(|&r| r > 0.0)
                    .fold(f64::INFINITY, f64::min)
            }
        };

        let theta = match regime {
            Regime::Parabolic => None,
            _ => Some(theta(epsilon, g)?),
        };
        let k_super = (lead > DEGENERATE_TOL).then(|| e2 * s / lead);

        Ok(Self {
            epsilon,
            s,
            regime,
            s_star,
            lambda,
            lambda_prime,
            theta,
            k_super,
        })
    }

    /// Parameters at the minimal speed `s*(eps)`.
    pub fn minimal(epsilon: f64, g: &GrowthFunction) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: format!("must be positive and finite, got {epsilon}"),
            });
        }
        Self::new(epsilon, minimal_speed(epsilon, g), g)
    }

    pub fn is_minimal_speed(&self) -> bool {
        (self.s - self.s_star).abs() <= 1e-9 * self.s_star
    }

    pub fn is_supersonic(&self) -> bool {
        self.k_super.is_some()
    }
}

/// Slope of the stability weight `phi` as a function of the profile value `nu`.
///
/// Parabolic regime: `s (1 - eps^2 F'(nu)) / (2 (1 - eps^2 s^2))`, which tends
/// to the decay rate `lambda` as `nu -> 0`. Critical and hyperbolic regimes:
/// `eps F'(nu) / (1 - eps^2 F'(nu))`, singular where the denominator vanishes.
pub fn weight_slope(nu: f64, params: &WaveParameters, g: &GrowthFunction) -> Result<f64> {
    if !params.is_minimal_speed() {
        return Err(Error::Speed {
            speed: params.s,
            reason: format!("weight defined for the minimal speed {} only", params.s_star),
        });
    }
    let e2 = params.epsilon * params.epsilon;
    let d = g.df(nu);
    match params.regime {
        Regime::Parabolic => {
            let s = params.s;
            Ok(s * (1.0 - e2 * d) / (2.0 * (1.0 - e2 * s * s)))
        }
        Regime::Critical | Regime::Hyperbolic => {
            let denom = 1.0 - e2 * d;
            if denom <= 1e-12 {
                return Err(Error::SingularWeight { nu });
            }
            Ok(params.epsilon * d / denom)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn logistic() -> GrowthFunction {
        GrowthFunction::logistic(1.0).unwrap()
    }

    fn poly_residual(a: f64, b: f64, c: f64, r: Complex64) -> f64 {
        (a * r * r + b * r + c).norm()
    }

    #[test]
    fn regimes() {
        let g = logistic();
        assert_eq!(classify(0.5, &g), Regime::Parabolic);
        assert_eq!(classify(1.0, &g), Regime::Critical);
        assert_eq!(classify(2.0, &g), Regime::Hyperbolic);
        let g4 = GrowthFunction::logistic(4.0).unwrap();
        assert_eq!(classify(1.0 / 4f64.sqrt(), &g4), Regime::Critical);
    }

    #[test]
    fn minimal_speeds() {
        let g = logistic();
        assert!((minimal_speed(0.5, &g) - 1.6).abs() < 1e-15);
        assert_eq!(minimal_speed(1.0, &g), 1.0);
        assert_eq!(minimal_speed(2.0, &g), 0.5);
    }

    #[test]
    fn minimal_speed_is_continuous_at_transition() {
        let g = GrowthFunction::logistic(2.5).unwrap();
        let ec = 1.0 / 2.5f64.sqrt();
        let parabolic = 2.0 * 2.5f64.sqrt() / (1.0 + ec * ec * 2.5);
        assert!((parabolic - 1.0 / ec).abs() < 1e-12);
        let below = minimal_speed(ec * (1.0 - 1e-9), &g);
        let above = minimal_speed(ec * (1.0 + 1e-9), &g);
        assert!((below - above).abs() < 1e-8);
    }

    #[test]
    fn double_root_at_minimal_speed() {
        let g = logistic();
        let p = WaveParameters::new(0.5, 1.6, &g).unwrap();
        let r = char_roots_zero(&p, &g).unwrap();
        // s (1 - eps^2 F'(0)) / (2 (1 - eps^2 s^2)) = 1.2 / 0.72
        let expected: f64 = 1.6 * 0.75 / (2.0 * (1.0 - 0.25 * 2.56));
        assert!((expected - 5.0 / 3.0).abs() < 1e-14);
        for root in r {
            assert_eq!(root.im, 0.0);
            assert!((root.re - 5.0 / 3.0).abs() < 1e-12);
        }
        assert_eq!(p.lambda, Some(r[0].re));
    }

    #[test]
    fn complex_roots_below_minimal_speed() {
        let g = logistic();
        let p = WaveParameters::new(0.5, 1.0, &g).unwrap();
        assert!(discriminant_zero(0.5, 1.0, &g) < 0.0);
        let r = char_roots_zero(&p, &g).unwrap();
        assert!(r[0].im < 0.0 && r[1].im > 0.0);
        assert_eq!(r[0].re, r[1].re);
        assert_eq!(p.lambda, None);
    }

    #[test]
    fn supersonic_roots_have_opposite_signs() {
        let g = logistic();
        let p = WaveParameters::new(2f64.sqrt(), 1.0, &g).unwrap();
        let r = char_roots_zero(&p, &g).unwrap();
        let (a, b, c) = char_poly_zero(p.epsilon, p.s, &g);
        assert!((r[0].re * r[1].re - c / a).abs() < 1e-12);
        assert!((c / a + 1.0).abs() < 1e-12);
        assert!(r[0].re < 0.0 && r[1].re > 0.0);
        for root in r {
            assert!(poly_residual(a, b, c, root) < 1e-12);
        }
    }

    #[test]
    fn roots_at_one() {
        let g = logistic();
        let p = WaveParameters::new(0.5, 1.6, &g).unwrap();
        let r = char_roots_one(&p, &g).unwrap();
        let (a, b, c) = char_poly_one(0.5, 1.6, &g);
        assert!((a + 0.36).abs() < 1e-14 && (b + 2.0).abs() < 1e-14 && c == 1.0);
        assert!(r[0].re < 0.0 && r[1].re > 0.0);
        for root in r {
            assert_eq!(root.im, 0.0);
            assert!(poly_residual(a, b, c, root) < 1e-12);
        }
        // 0.36 l^2 + 2 l - 1 = 0
        let pos = (-2.0 + (4.0f64 + 1.44).sqrt()) / 0.72;
        assert!((p.lambda_prime - pos).abs() < 1e-12);

        let sup = WaveParameters::new(2f64.sqrt(), 1.0, &g).unwrap();
        let r = char_roots_one(&sup, &g).unwrap();
        assert!(r[0].re > 0.0 && r[1].re > 0.0);
        assert!((r[0].re - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((r[1].re - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_quadratic_rejected() {
        let g = logistic();
        let p = WaveParameters::new(2.0, 0.5, &g).unwrap();
        assert!(matches!(
            char_roots_zero(&p, &g),
            Err(Error::DegenerateQuadratic { .. })
        ));
        assert!(char_roots_one(&p, &g).is_err());
        // sonic speed in the parabolic regime uses the linear root
        let sonic = WaveParameters::new(0.5, 2.0, &g).unwrap();
        assert!((sonic.lambda.unwrap() - 1.0 / (0.75 * 2.0)).abs() < 1e-14);
    }

    #[test]
    fn theta_values() {
        let g = logistic();
        assert!((theta(2.0, &g).unwrap() - 0.75).abs() < 1e-12);
        assert_eq!(theta(1.0, &g).unwrap(), 0.0);
        let t3 = theta(3.0, &g).unwrap();
        assert!((t3 - (1.0 - 1.0 / 9.0)).abs() < 1e-12);
        assert!((9.0 * g.f(t3) - t3).abs() < 1e-13);
        assert!(matches!(theta(0.5, &g), Err(Error::Regime { .. })));
    }

    #[test]
    fn supersonic_unstable_slope() {
        let g = logistic();
        let l = supersonic_slope(2f64.sqrt(), 1.0, &g).unwrap();
        assert!((l - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-14);
        let p = WaveParameters::new(2f64.sqrt(), 1.0, &g).unwrap();
        let k = p.k_super.unwrap();
        assert!((k - 2.0).abs() < 1e-14);
        assert!(k * p.s > 1.0);
        assert!(k * g.fprime0() > l);
        assert!(supersonic_slope(0.5, 1.6, &g).is_err());
    }

    #[test]
    fn weight_slope_parabolic() {
        let g = logistic();
        let p = WaveParameters::minimal(0.5, &g).unwrap();
        let lambda = p.lambda.unwrap();
        assert!((weight_slope(0.0, &p, &g).unwrap() - lambda).abs() < 1e-12);
        let ratio = weight_slope(1.0, &p, &g).unwrap() / weight_slope(0.0, &p, &g).unwrap();
        assert!((ratio - 1.25 / 0.75).abs() < 1e-12);
        for i in 0..=100 {
            let nu = i as f64 / 100.0;
            assert!(weight_slope(nu, &p, &g).unwrap() >= lambda - 1e-12);
        }
        let off = WaveParameters::new(0.5, 1.8, &g).unwrap();
        assert!(weight_slope(0.5, &off, &g).is_err());
    }

    #[test]
    fn weight_slope_hyperbolic_and_critical() {
        let g = logistic();
        let h = WaveParameters::minimal(2.0, &g).unwrap();
        // eps F'(nu) / (1 - eps^2 F'(nu)) at nu = 0.75: 2 (-0.5) / 3
        assert!((weight_slope(0.75, &h, &g).unwrap() + 1.0 / 3.0).abs() < 1e-14);
        assert!(weight_slope(0.0, &h, &g).is_err());
        let c = WaveParameters::minimal(1.0, &g).unwrap();
        assert!(matches!(
            weight_slope(0.0, &c, &g),
            Err(Error::SingularWeight { .. })
        ));
        assert!(weight_slope(1e-3, &c, &g).unwrap() > 100.0);
    }

    proptest! {
        #[test]
        fn vieta_identities(eps in 0.05f64..0.99, ds in 0.0f64..1.0, rate in 0.5f64..2.0) {
            let g = GrowthFunction::logistic(rate).unwrap();
            let eps = eps / rate.sqrt();
            let s_star = minimal_speed(eps, &g);
            let s = s_star + ds * (1.0 / eps - s_star) * 0.98;
            let p = WaveParameters::new(eps, s, &g).unwrap();
            let r = char_roots_zero(&p, &g).unwrap();
            let (a, b, c) = char_poly_zero(eps, s, &g);
            let sum = r[0] + r[1];
            let prod = r[0] * r[1];
            prop_assert!((sum.re + b / a).abs() <= 1e-10 * (b / a).abs());
            prop_assert!((prod.re - c / a).abs() <= 1e-10 * (c / a).abs());
            for root in r {
                prop_assert!(poly_residual(a, b, c, root) < 1e-10);
            }
        }

        #[test]
        fn discriminant_vanishes_at_minimal_speed(k in 1usize..10, rate in 0.5f64..3.0) {
            let g = GrowthFunction::logistic(rate).unwrap();
            let eps = k as f64 / 10.0 / rate.sqrt();
            let s = minimal_speed(eps, &g);
            prop_assert!(discriminant_zero(eps, s, &g).abs() < 1e-9);
        }

        #[test]
        fn minimal_speed_bounded(eps in 0.01f64..5.0, rate in 0.1f64..5.0) {
            let g = GrowthFunction::logistic(rate).unwrap();
            let s = minimal_speed(eps, &g);
            prop_assert!(s <= (2.0 * rate.sqrt()).min(1.0 / eps) * (1.0 + 1e-12));
        }
    }
}
