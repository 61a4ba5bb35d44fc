//! Front tracking, speed fits, profile comparison and the weighted energy
//! functionals of the stability analysis.
//!
//! Perturbation energies use the moving-frame field `u = rho - nu` and its
//! weighted version `w = e^phi u`, where the weight slope is
//!
//! ```text
//! phi' = s (1 - eps^2 F'(nu)) / (2 (1 - eps^2 s^2))      (parabolic regime)
//! phi' = eps F'(nu) / (1 - eps^2 F'(nu))                 (critical, hyperbolic)
//! ```
//!
//! All integrals use the trapezoid rule on the sample grid.

use crate::dispersion::{weight_slope, Regime, WaveParameters};
use crate::error::{Error, Result};
use crate::growth::GrowthFunction;
use crate::numeric::quad::{cumulative_trapezoid, trapezoid};
use crate::profile::FrontProfile;

/// Leftmost downward crossing of `level`, linearly interpolated between the
/// bracketing samples. A jump between two cells lands on their interface.
pub fn front_position(x: &[f64], rho: &[f64], level: f64) -> Result<f64> {
    if x.len() != rho.len() {
        return Err(Error::Shape(format!("x has {} samples, rho has {}", x.len(), rho.len())));
    }
    if rho.len() < 2 || !(rho[0] > level && level > rho[rho.len() - 1]) {
        return Err(Error::NoCrossing { level });
    }
    let i = rho
        .windows(2)
        .position(|w| w[0] >= level && w[1] < level)
        .ok_or(Error::NoCrossing { level })?;
    let (a, b) = (rho[i], rho[i + 1]);
    Ok(x[i] + (a - level) / (a - b) * (x[i + 1] - x[i]))
}

/// Density field at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSnapshot {
    pub t: f64,
    pub x: Vec<f64>,
    pub rho: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeedEstimate {
    pub level: f64,
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
    /// Least-squares slope over `window`.
    pub speed: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
}

/// Least-squares front speed after discarding the first `discard_fraction`
/// of the time range.
pub fn estimate_speed(snapshots: &[FieldSnapshot], level: f64, discard_fraction: f64) -> Result<SpeedEstimate> {
    let mut times = Vec::with_capacity(snapshots.len());
    let mut positions = Vec::with_capacity(snapshots.len());
    for s in snapshots {
        times.push(s.t);
        positions.push(front_position(&s.x, &s.rho, level)?);
    }
    fit_speed(times, positions, level, discard_fraction)
}

/// [`estimate_speed`] on front positions that were already extracted.
pub fn fit_speed(times: Vec<f64>, positions: Vec<f64>, level: f64, discard_fraction: f64) -> Result<SpeedEstimate> {
    if !(0.0..1.0).contains(&discard_fraction) {
        return Err(Error::InvalidParameter {
            name: "discard_fraction",
            reason: format!("must lie in [0, 1), got {discard_fraction}"),
        });
    }
    if times.len() != positions.len() {
        return Err(Error::Shape(format!(
            "{} times but {} positions",
            times.len(),
            positions.len()
        )));
    }
    let (t_min, t_max) = times
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &t| (lo.min(t), hi.max(t)));
    let t_lo = t_min + discard_fraction * (t_max - t_min);
    let kept: Vec<(f64, f64)> = times
        .iter()
        .zip(&positions)
        .filter(|(t, _)| **t >= t_lo)
        .map(|(&t, &x)| (t, x))
        .collect();
    if kept.len() < 5 {
        return Err(Error::InsufficientSnapshots {
            needed: 5,
            got: kept.len(),
        });
    }
    let n = kept.len() as f64;
    let mt = kept.iter().map(|p| p.0).sum::<f64>() / n;
    let mx = kept.iter().map(|p| p.1).sum::<f64>() / n;
    let stt: f64 = kept.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let stx: f64 = kept.iter().map(|p| (p.0 - mt) * (p.1 - mx)).sum();
    let sxx: f64 = kept.iter().map(|p| (p.1 - mx).powi(2)).sum();
    let speed = stx / stt;
    let r_squared = if sxx == 0.0 { 1.0 } else { (stx * stx / (stt * sxx)).clamp(0.0, 1.0) };
    Ok(SpeedEstimate {
        level,
        times,
        positions,
        speed,
        r_squared,
        window: (t_lo, t_max),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileComparison {
    pub shift: f64,
    pub linf_error: f64,
    pub l2_error: f64,
}

/// Aligns the profile with `rho` at the half level and measures the misfit
/// of `rho(x)` against `nu(x - shift)` over the sampled profile range.
pub fn compare_profile(x: &[f64], rho: &[f64], profile: &FrontProfile) -> Result<ProfileComparison> {
    let crossing = front_position(x, rho, 0.5)?;
    let half = profile
        .level_crossing(0.5)
        .ok_or(Error::NoCrossing { level: 0.5 })?;
    let shift = crossing - half;
    let (lo, hi) = (profile.z[0], profile.z[profile.z.len() - 1]);
    let mut linf: f64 = 0.0;
    let mut sq = 0.0;
    let mut count = 0usize;
    for (i, (&xi, &r)) in x.iter().zip(rho).enumerate() {
        let z = xi - shift;
        if z < lo || z > hi {
            continue;
        }
        let e = r - profile.eval(z);
        linf = linf.max(e.abs());
        let h = if i + 1 < x.len() { x[i + 1] - xi } else { xi - x[i - 1] };
        sq += e * e * h;
        count += 1;
    }
    if count == 0 {
        return Err(Error::Shape("profile range does not overlap the field".into()));
    }
    Ok(ProfileComparison {
        shift,
        linf_error: linf,
        l2_error: sq.sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpSharpness {
    /// Cells between the last value `>= 0.9 theta` and the first `<= 0.1 theta`.
    pub width_cells: usize,
    /// `rho` at the last cell `>= 0.9 theta`, an estimate of the jump height.
    pub back_value: f64,
}

pub fn jump_sharpness(x: &[f64], rho: &[f64], theta: f64) -> Result<JumpSharpness> {
    if x.len() != rho.len() {
        return Err(Error::Shape(format!("x has {} samples, rho has {}", x.len(), rho.len())));
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidParameter {
            name: "theta",
            reason: format!("must lie in (0, 1), got {theta}"),
        });
    }
    let (hi, lo) = (0.9 * theta, 0.1 * theta);
    let below = rho
        .iter()
        .position(|&r| r < hi)
        .ok_or_else(|| Error::NoFront(format!("rho never drops below {hi}")))?;
    if below == 0 {
        return Err(Error::NoFront(format!("rho starts below {hi}")));
    }
    let top = below - 1;
    let bottom = rho[top..]
        .iter()
        .position(|&r| r <= lo)
        .map(|k| k + top)
        .ok_or_else(|| Error::NoFront(format!("rho never drops to {lo}")))?;
    Ok(JumpSharpness {
        width_cells: bottom - top,
        back_value: rho[top],
    })
}

/// Stability weight `phi` on the grid `z`, with `phi(z0) = 0`.
///
/// Critical and hyperbolic fronts are weighted on their support only; grid
/// points past the support carry `phi = NaN`. In the critical regime the
/// weight blows up at the edge, so the grid must stop before it.
pub fn weight_phi(z: &[f64], profile: &FrontProfile, g: &GrowthFunction, z0: f64) -> Result<Vec<f64>> {
    let params = &profile.params;
    let edge = profile.support_edge().unwrap_or(f64::INFINITY);
    if params.regime == Regime::Critical && z.last().is_some_and(|&zl| zl >= edge) {
        return Err(Error::Regime {
            expected: "grid inside the support (weight is singular at the critical front edge)",
            actual: params.regime,
        });
    }
    let inside = z.partition_point(|&zi| zi <= edge);
    if inside == 0 {
        return Err(Error::Shape("grid lies outside the front support".into()));
    }
    let slope = z[..inside]
        .iter()
        .map(|&zi| weight_slope(profile.eval(zi), params, g))
        .collect::<Result<Vec<f64>>>()?;
    let mut phi = cumulative_trapezoid(&z[..inside], &slope);
    let anchor = interp_linear(&z[..inside], &phi, z0);
    for p in &mut phi {
        *p -= anchor;
    }
    phi.resize(z.len(), f64::NAN);
    Ok(phi)
}

fn interp_linear(x: &[f64], y: &[f64], at: f64) -> f64 {
    let n = x.len();
    if n == 1 || at <= x[0] {
        return y[0];
    }
    if at >= x[n - 1] {
        return y[n - 1];
    }
    let i = x.partition_point(|&v| v <= at) - 1;
    y[i] + (y[i + 1] - y[i]) * (at - x[i]) / (x[i + 1] - x[i])
}

/// `1/2 int (u^2 + v^2) e^{2 phi} dz` for a given weight; points where `phi`
/// is NaN (outside the support) do not contribute.
pub fn weighted_energy(z: &[f64], u: &[f64], v: &[f64], phi: &[f64]) -> f64 {
    let density: Vec<f64> = (0..z.len())
        .map(|i| {
            if phi[i].is_nan() {
                0.0
            } else {
                0.5 * (u[i] * u[i] + v[i] * v[i]) * (2.0 * phi[i]).exp()
            }
        })
        .collect();
    let last = phi.iter().rposition(|p| !p.is_nan()).map_or(0, |k| k + 1);
    trapezoid(&z[..last], &density[..last])
}

/// Lyapunov functional `1/2 int (u^2 + v^2) e^{2 phi} dz` with `phi(z0) = 0`.
pub fn lyapunov_energy(
    z: &[f64],
    u: &[f64],
    v: &[f64],
    profile: &FrontProfile,
    g: &GrowthFunction,
    z0: f64,
) -> Result<f64> {
    if u.len() != z.len() || v.len() != z.len() {
        return Err(Error::Shape(format!(
            "z, u, v have {}, {}, {} samples",
            z.len(),
            u.len(),
            v.len()
        )));
    }
    let phi = weight_phi(z, profile, g, z0)?;
    Ok(weighted_energy(z, u, v, &phi))
}

/// Discriminant of the dissipation quadratic form at profile value `nu`:
/// `4/eps^2 ((1 - eps^2 s^2) phi'^2 - s (1 - eps^2 F'(nu)) phi' + F'(nu))`.
pub fn lyapunov_discriminant(nu: f64, params: &WaveParameters, g: &GrowthFunction) -> Result<f64> {
    let dphi = weight_slope(nu, params, g)?;
    let (eps, s) = (params.epsilon, params.s);
    let e2 = eps * eps;
    let d = g.df(nu);
    Ok(4.0 / e2 * ((1.0 - e2 * s * s) * dphi * dphi - s * (1.0 - e2 * d) * dphi + d))
}

/// Parabolic dissipation rate `A` with `d/dt L + int A (u^2 + v^2) e^{2 phi} <= 0`.
pub fn lyapunov_gap(nu: f64, params: &WaveParameters, g: &GrowthFunction) -> Result<f64> {
    if params.regime != Regime::Parabolic {
        return Err(Error::Regime {
            expected: "parabolic",
            actual: params.regime,
        });
    }
    let dphi = weight_slope(nu, params, g)?;
    let e2 = params.epsilon * params.epsilon;
    let d = g.df(nu);
    let lead = 2.0 * params.s * dphi - d + 1.0 / e2;
    let root = ((d + 1.0 / e2).powi(2) + 4.0 / e2 * dphi * dphi).sqrt();
    Ok(0.5 * (lead - root))
}

/// Weights `A1 ... A8`, the weight `phi` and the constants of the combined
/// energy, sampled on a moving-frame grid. Parabolic minimal fronts only.
#[derive(Debug, Clone)]
pub struct EnergyWeights {
    pub z: Vec<f64>,
    pub nu: Vec<f64>,
    pub dnu: Vec<f64>,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
    pub a1: Vec<f64>,
    pub a2: Vec<f64>,
    pub da1: Vec<f64>,
    pub a3: Vec<f64>,
    pub a4: Vec<f64>,
    pub da4: Vec<f64>,
    pub a5: Vec<f64>,
    pub a6: Vec<f64>,
    pub a7: Vec<f64>,
    pub a8: Vec<f64>,
    pub z0: f64,
    pub delta: f64,
    pub delta_prime: f64,
    pub delta_second: f64,
    params: WaveParameters,
    one_minus_e2df: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub t: f64,
    pub lyapunov: f64,
    pub e1u: f64,
    pub e2u: f64,
    pub e1w: f64,
    pub e2w: f64,
    pub q1u: f64,
    pub q2u: f64,
    pub q1w: f64,
    pub q2w: f64,
    /// `E1w + delta' E2w + delta'' (E1u + delta E2u)`.
    pub e_combined: f64,
    /// `(delta, delta', delta'')`.
    pub deltas: (f64, f64, f64),
    pub z0: f64,
    /// `int_{z > z0} e^{-phi} |w|^2 dz`.
    pub tail: f64,
}

fn central_diff(z: &[f64], f: &[f64]) -> Vec<f64> {
    let n = z.len();
    (0..n)
        .map(|i| {
            let (a, b) = (i.saturating_sub(1), (i + 1).min(n - 1));
            (f[b] - f[a]) / (z[b] - z[a])
        })
        .collect()
}

impl EnergyWeights {
    pub fn new(z: &[f64], profile: &FrontProfile, g: &GrowthFunction) -> Result<Self> {
        let params = profile.params;
        if params.regime != Regime::Parabolic {
            return Err(Error::Regime {
                expected: "parabolic",
                actual: params.regime,
            });
        }
        if z.len() < 3 {
            return Err(Error::Shape("energy grid needs at least three points".into()));
        }
        let (eps, s) = (params.epsilon, params.s);
        let e2 = eps * eps;
        let damping = 1.0 - e2 * g.fprime0();
        let n = z.len();
        let mut nu = Vec::with_capacity(n);
        let mut dnu = Vec::with_capacity(n);
        for &zi in z {
            let (v, d) = profile.eval_with_slope(zi);
            nu.push(v);
            dnu.push(d);
        }
        let dphi = nu
            .iter()
            .map(|&v| weight_slope(v, &params, g))
            .collect::<Result<Vec<f64>>>()?;
        let df: Vec<f64> = nu.iter().map(|&v| g.df(v)).collect();
        let d2f: Vec<f64> = nu.iter().map(|&v| g.d2f(v)).collect();
        let one_minus_e2df: Vec<f64> = df.iter().map(|d| 1.0 - e2 * d).collect();

        let a1: Vec<f64> = (0..n).map(|i| s * e2 * d2f[i] * dnu[i] - df[i]).collect();
        let a2: Vec<f64> = (0..n).map(|i| 0.5 * s * e2 * d2f[i] * dnu[i] - df[i]).collect();
        let da1 = central_diff(z, &a1);
        let a3: Vec<f64> = (0..n).map(|i| 2.0 * e2 * s * dphi[i] + one_minus_e2df[i]).collect();
        let a4: Vec<f64> = (0..n)
            .map(|i| -s * one_minus_e2df[i] - 2.0 * (e2 * s * s - 1.0) * dphi[i])
            .collect();
        let da4 = central_diff(z, &a4);
        // with A4 = 0 the second derivative of phi drops out of A5
        let a5: Vec<f64> = (0..n)
            .map(|i| {
                s * one_minus_e2df[i] * dphi[i] + (e2 * s * s - 1.0) * dphi[i] * dphi[i]
                    + 0.5 * e2 * s * d2f[i] * dnu[i]
                    - df[i]
            })
            .collect();

        let delta = damping / (2.0 * e2);
        let delta_prime = delta * (1.0 - e2 * s * s) / (1.0 + e2 * s * s);
        let a6: Vec<f64> = a1.iter().map(|a| 0.5 * a + delta * damping / 4.0).collect();
        let a7: Vec<f64> = (0..n).map(|i| 0.5 * s * da1[i] + delta * a2[i]).collect();
        let a8: Vec<f64> = a5.iter().map(|a| 0.5 * a + delta_prime * damping / 4.0).collect();

        let good = (0..n).take_while(|&i| a6[i].min(a7[i]) > 0.0).count();
        if good == 0 {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: "min(A6, A7) is not positive at the left end; extend the grid to the left".into(),
            });
        }
        if good == n {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: "min(A6, A7) stays positive on the whole grid; extend the grid to the right".into(),
            });
        }
        let i0 = good - 1;
        let z0 = z[i0];
        let mut phi = cumulative_trapezoid(z, &dphi);
        let anchor = phi[i0];
        for p in &mut phi {
            *p -= anchor;
        }

        let mut sup6: f64 = 0.0;
        let mut sup7: f64 = 0.0;
        for i in good..n {
            let decay = (-2.0 * phi[i]).exp();
            sup6 = sup6.max((a6[i] * decay).abs());
            if a5[i] > 0.0 {
                sup7 = sup7.max((a7[i] * decay / a5[i]).abs());
            }
        }
        let bound6 = if sup6 > 0.0 { damping / 4.0 / sup6 } else { f64::INFINITY };
        let bound7 = if sup7 > 0.0 { 1.0 / sup7 } else { f64::INFINITY };
        let delta_second = 0.5 * delta_prime * bound6.min(bound7);
        if !delta_second.is_finite() || delta_second <= 0.0 {
            return Err(Error::Integration(format!("delta'' = {delta_second} is not a positive number")));
        }

        Ok(Self {
            z: z.to_vec(),
            nu,
            dnu,
            phi,
            dphi,
            a1,
            a2,
            da1,
            a3,
            a4,
            da4,
            a5,
            a6,
            a7,
            a8,
            z0,
            delta,
            delta_prime,
            delta_second,
            params,
            one_minus_e2df,
        })
    }

    /// Energies at time `t` from `u(t)`, `u(t + dt)` and `v(t)`.
    pub fn report(&self, t: f64, u_prev: &[f64], u_curr: &[f64], v_prev: &[f64], dt: f64) -> Result<EnergyReport> {
        let n = self.z.len();
        if u_prev.len() != n || u_curr.len() != n || v_prev.len() != n {
            return Err(Error::Shape(format!(
                "fields have {}, {}, {} samples, grid has {n}",
                u_prev.len(),
                u_curr.len(),
                v_prev.len()
            )));
        }
        if !(dt > 0.0) {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: format!("must be positive, got {dt}"),
            });
        }
        let (eps, s) = (self.params.epsilon, self.params.s);
        let e2 = eps * eps;
        let sub = 1.0 - e2 * s * s;
        let z = &self.z;
        let u = u_prev;
        let uz = central_diff(z, u);
        let ut: Vec<f64> = (0..n).map(|i| (u_curr[i] - u[i]) / dt).collect();

        let integrate = |f: &dyn Fn(usize) -> f64| {
            let y: Vec<f64> = (0..n).map(f).collect();
            trapezoid(z, &y)
        };
        let d = |i: usize| ut[i] - s * uz[i];
        let ephi = |i: usize| self.phi[i].exp();
        let w = |i: usize| ephi(i) * u[i];
        let wt = |i: usize| ephi(i) * ut[i];
        let wz = |i: usize| ephi(i) * (uz[i] + self.dphi[i] * u[i]);

        let e1u = integrate(&|i| 0.5 * e2 * d(i).powi(2) + 0.5 * uz[i].powi(2) + 0.5 * self.a1[i] * u[i] * u[i]);
        let e2u = integrate(&|i| e2 * u[i] * d(i) + 0.5 * self.one_minus_e2df[i] * u[i] * u[i]);
        let q1u = integrate(&|i| self.one_minus_e2df[i] * d(i).powi(2) + 0.5 * s * self.da1[i] * u[i] * u[i]);
        let q2u = integrate(&|i| -e2 * d(i).powi(2) + uz[i].powi(2) + self.a2[i] * u[i] * u[i]);
        let e1w = integrate(&|i| 0.5 * e2 * wt(i).powi(2) + 0.5 * sub * wz(i).powi(2) + 0.5 * self.a5[i] * w(i).powi(2));
        let e2w = integrate(&|i| e2 * w(i) * wt(i) + 0.5 * self.a3[i] * w(i).powi(2));
        let q1w = integrate(&|i| self.a3[i] * wt(i).powi(2) + self.a4[i] * wt(i) * wz(i));
        let q2w = integrate(&|i| {
            -e2 * wt(i).powi(2) + sub * wz(i).powi(2) + 2.0 * e2 * s * wt(i) * wz(i)
                + (self.a5[i] - 0.5 * self.da4[i]) * w(i).powi(2)
        });
        let lyapunov = integrate(&|i| 0.5 * (u[i] * u[i] + v_prev[i] * v_prev[i]) * (2.0 * self.phi[i]).exp());
        let tail = integrate(&|i| if z[i] > self.z0 { (-self.phi[i]).exp() * w(i).powi(2) } else { 0.0 });

        let e_combined = e1w + self.delta_prime * e2w + self.delta_second * (e1u + self.delta * e2u);
        Ok(EnergyReport {
            t,
            lyapunov,
            e1u,
            e2u,
            e1w,
            e2w,
            q1u,
            q2u,
            q1w,
            q2w,
            e_combined,
            deltas: (self.delta, self.delta_prime, self.delta_second),
            z0: self.z0,
            tail,
        })
    }
}

/// Energies from two consecutive moving-frame snapshots `dt` apart.
#[allow(clippy::too_many_arguments)]
pub fn energy_suite(
    z: &[f64],
    u_prev: &[f64],
    u_curr: &[f64],
    v_prev: &[f64],
    dt: f64,
    t: f64,
    profile: &FrontProfile,
    g: &GrowthFunction,
) -> Result<EnergyReport> {
    EnergyWeights::new(z, profile, g)?.report(t, u_prev, u_curr, v_prev, dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{build_minimal, ProfileOptions};

    fn logistic() -> GrowthFunction {
        GrowthFunction::logistic(1.0).unwrap()
    }

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
    }

    #[test]
    fn step_crossing() {
        let x = grid(0.0, 10.0, 100);
        let rho: Vec<f64> = x.iter().map(|&v| if v < 3.0 { 1.0 } else { 0.0 }).collect();
        let p = front_position(&x, &rho, 0.5).unwrap();
        assert!((p - 3.0).abs() <= 0.05);
        let shifted: Vec<f64> = x.iter().map(|&v| v + 0.37).collect();
        assert_eq!(front_position(&shifted, &rho, 0.5).unwrap(), p + 0.37);
        assert!(matches!(front_position(&x, &vec![1.0; 101], 0.5), Err(Error::NoCrossing { .. })));
    }

    #[test]
    fn ramp_crossing() {
        let x = grid(0.0, 1.0, 40);
        let rho: Vec<f64> = x.iter().map(|&v| 1.0 - v).collect();
        assert!((front_position(&x, &rho, 0.25).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn profile_sample_crossing() {
        let g = logistic();
        let p = build_minimal(0.5, &g, &ProfileOptions::default()).unwrap();
        let x = grid(-20.0, 40.0, 1200);
        let rho: Vec<f64> = x.iter().map(|&v| p.eval(v - 1.6 * 7.0)).collect();
        assert!((front_position(&x, &rho, 0.5).unwrap() - 11.2).abs() < 0.05);
        let cmp = compare_profile(&x, &rho, &p).unwrap();
        assert!(cmp.linf_error < 1e-12 && cmp.l2_error < 1e-12);
        assert!((cmp.shift - 11.2).abs() < 1e-2);
    }

    #[test]
    fn synthetic_speed() {
        let x = grid(-10.0, 50.0, 600);
        let snaps: Vec<FieldSnapshot> = (0..20)
            .map(|k| {
                let t = k as f64;
                let rho = x.iter().map(|&v| (1.0 - (v - 1.6 * t)).clamp(0.0, 1.0)).collect();
                FieldSnapshot { t, x: x.clone(), rho }
            })
            .collect();
        let est = estimate_speed(&snaps, 0.5, 0.5).unwrap();
        assert!((est.speed - 1.6).abs() < 1e-10);
        assert!(est.r_squared > 1.0 - 1e-12);
        assert_eq!(est.window, (9.5, 19.0));
        assert!(matches!(
            estimate_speed(&snaps[..8], 0.5, 0.5),
            Err(Error::InsufficientSnapshots { .. })
        ));
    }

    #[test]
    fn sharpness_of_exact_jump() {
        let g = logistic();
        let p = build_minimal(2.0, &g, &ProfileOptions::default()).unwrap();
        let x = grid(-10.0, 10.0, 400);
        let rho: Vec<f64> = x.iter().map(|&v| p.eval(v)).collect();
        let j = jump_sharpness(&x, &rho, 0.75).unwrap();
        assert!(j.width_cells <= 1);
        assert!((j.back_value - 0.75).abs() < 1e-8);
    }

    #[test]
    fn smooth_front_is_not_sharp() {
        let g = logistic();
        let p = build_minimal(0.5, &g, &ProfileOptions::default()).unwrap();
        let width = |n: usize| {
            let x = grid(-20.0, 20.0, n);
            let rho: Vec<f64> = x.iter().map(|&v| p.eval(v)).collect();
            jump_sharpness(&x, &rho, 0.75).unwrap().width_cells as f64
        };
        let ratio = width(1600) / width(800);
        assert!((ratio - 2.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn weighted_energy_hook() {
        let z = grid(0.0, 1.0, 100);
        let ones = vec![1.0; 101];
        assert!((weighted_energy(&z, &ones, &ones, &vec![0.0; 101]) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn critical_weight_closed_form() {
        let g = logistic();
        let p = build_minimal(1.0, &g, &ProfileOptions::default()).unwrap();
        let z = grid(-12.0, -0.5, 115_000);
        let phi = weight_phi(&z, &p, &g, -2.0).unwrap();
        let exact = |z: f64| -z / 2.0 - (1.0 - (z / 2.0).exp()).ln();
        let err = z
            .iter()
            .zip(&phi)
            .map(|(&zz, &ph)| (ph - (exact(zz) - exact(-2.0))).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-8, "max error {err}");
        let zero = vec![0.0; z.len()];
        assert_eq!(lyapunov_energy(&z, &zero, &zero, &p, &g, -2.0).unwrap(), 0.0);
        let past = grid(-5.0, 1.0, 60);
        assert!(matches!(weight_phi(&past, &p, &g, -2.0), Err(Error::Regime { .. })));
    }

    #[test]
    fn discriminant_and_gap() {
        let g = logistic();
        let p = build_minimal(0.5, &g, &ProfileOptions::default()).unwrap();
        let params = p.params;
        let e2 = 0.25;
        let mut half_gap = 0.0;
        let mut last_gap = 0.0;
        for &nu in &p.nu {
            let d = lyapunov_discriminant(nu, &params, &g).unwrap();
            let df = g.df(nu);
            let closed = -4.0 * (1.0 - df) * (1.0 - e2 * e2 * df) / (e2 * (1.0 - e2).powi(2));
            assert!((d - closed).abs() < 1e-10 * (1.0 + closed.abs()));
            assert!(d <= 1e-12);
            let gap = lyapunov_gap(nu, &params, &g).unwrap();
            assert!(gap >= -1e-12);
            if nu >= 0.5 {
                half_gap = gap;
            }
            last_gap = gap;
        }
        assert!(last_gap < half_gap);
    }

    #[test]
    fn weights_in_parabolic_regime() {
        let g = logistic();
        let p = build_minimal(0.5, &g, &ProfileOptions::default()).unwrap();
        let z = grid(-30.0, 30.0, 1200);
        let w = EnergyWeights::new(&z, &p, &g).unwrap();
        assert!(w.a4.iter().all(|a| a.abs() < 1e-12));
        assert!(w.a5.iter().all(|&a| a >= 0.0));
        assert!(w.delta_prime < w.delta && w.delta_second > 0.0);
        let n = z.len() - 1;
        // A1, A2 tend to -F'(1) = 1 behind and -F'(0) = -1 ahead
        assert!((w.a1[0] - 1.0).abs() < 1e-4 && (w.a2[0] - 1.0).abs() < 1e-4);
        assert!((w.a1[n] + 1.0).abs() < 1e-4 && (w.a2[n] + 1.0).abs() < 1e-4);
        assert!(w.z0 > -30.0 && w.z0 < 30.0);
        let zero = vec![0.0; z.len()];
        let r = w.report(0.0, &zero, &zero, &zero, 0.01).unwrap();
        assert_eq!(r.e_combined, 0.0);
        assert_eq!((r.lyapunov, r.e1u, r.e2u, r.e1w, r.e2w, r.q1u, r.q2u, r.q1w, r.q2w), (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0));

        let h = build_minimal(2.0, &g, &ProfileOptions::default()).unwrap();
        assert!(matches!(EnergyWeights::new(&z, &h, &g), Err(Error::Regime { .. })));
    }
}
