//! Traveling-front profiles `nu(z)` in every regime.
//!
//! Each constructor integrates a first-order reduction of the profile equation
//!
//! ```text
//! (eps^2 s^2 - 1) nu'' - (1 - eps^2 F'(nu)) s nu' = F(nu)
//! ```
//!
//! with the adaptive integrator, records `nu`, `nu'` and `nu''` at the accepted
//! nodes, and resamples onto a uniform grid with a C² quintic Hermite
//! interpolant.
//!
//! - parabolic subsonic fronts: phase plane `p(nu) = -nu'`, started on the
//!   unstable eigendirection of the saddle at `nu = 1`;
//! - sonic front in the parabolic regime: the first-order limit equation;
//! - hyperbolic and critical fronts at `s = 1/eps`: first-order equation down
//!   to the jump height `theta`, extended by zero;
//! - supersonic fronts: time-reversed phase plane `P(v) = V'`, started on the
//!   unstable direction of the saddle at `v = 0`.

use crate::dispersion::{self, Regime, WaveParameters};
use crate::error::{Error, Result};
use crate::growth::GrowthFunction;
use crate::numeric::interp::QuinticHermite;
use crate::numeric::ode::{integrate, OdeOptions, Termination};
use crate::numeric::roots::bisect;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    SmoothParabolic,
    WeakSonic,
    DiscontinuousHyperbolic,
    ContinuousCritical,
    SmoothSupersonic,
}

impl ProfileKind {
    pub fn is_smooth(self) -> bool {
        matches!(self, ProfileKind::SmoothParabolic | ProfileKind::SmoothSupersonic)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftConvention {
    /// `nu(0) = 1/2`.
    HalfLevelAtOrigin,
    /// The front edge (jump, or end of support) sits at `z = 0`.
    JumpAtOrigin,
}

#[derive(Debug, Clone, Copy)]
pub struct ProfileOptions {
    /// Spacing of the uniform output grid.
    pub dz: f64,
    /// The profile is truncated where it is within `tol_end` of 0 or 1.
    pub tol_end: f64,
    /// Offset from the singular end points where integration starts or stops.
    pub delta0: f64,
    /// Extra zero samples to the right of a front edge.
    pub pad: f64,
    /// Post-condition on the central-difference residual for smooth kinds.
    pub residual_tol: Option<f64>,
    pub ode: OdeOptions,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self {
            dz: 0.002,
            tol_end: 1e-6,
            delta0: 1e-7,
            pad: 2.0,
            residual_tol: Some(1e-6),
            ode: OdeOptions {
                h_max: 0.02,
                ..OdeOptions::default()
            },
        }
    }
}

#[derive(Debug, Clone)]
enum Repr {
    /// Hermite interpolant through the integration nodes.
    Nodes(QuinticHermite),
    /// Only the uniform samples are known.
    Samples,
}

/// A sampled traveling front, decreasing from 1 to 0.
#[derive(Debug, Clone)]
pub struct FrontProfile {
    pub kind: ProfileKind,
    pub params: WaveParameters,
    pub z: Vec<f64>,
    pub nu: Vec<f64>,
    pub jump_location: Option<f64>,
    pub shift_convention: ShiftConvention,
    support_edge: Option<f64>,
    repr: Repr,
}

/// Phase-plane orbit of a supersonic front, `P = V'` as a function of `v = V`.
#[derive(Debug, Clone)]
pub struct PhaseOrbit {
    pub v: Vec<f64>,
    pub p: Vec<f64>,
    pub lambda_unstable: f64,
    pub k: f64,
}

impl PhaseOrbit {
    /// `Q(v) = P(v) - lambda v` at every node.
    pub fn q_residual(&self) -> Vec<f64> {
        self.v
            .iter()
            .zip(&self.p)
            .map(|(v, p)| p - self.lambda_unstable * v)
            .collect()
    }

    /// `R(v) = P(v) - k F(v)` at every node.
    pub fn r_residual(&self, g: &GrowthFunction) -> Vec<f64> {
        self.v.iter().zip(&self.p).map(|(&v, p)| p - self.k * g.f(v)).collect()
    }

    /// Largest excursion outside `0 <= P <= min(lambda v, k F(v))`.
    pub fn max_trapping_violation(&self, g: &GrowthFunction) -> f64 {
        self.v
            .iter()
            .zip(&self.p)
            .map(|(&v, &p)| {
                let upper = (self.lambda_unstable * v).min(self.k * g.f(v));
                (p - upper).max(-p).max(0.0)
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub max_abs: f64,
    pub interior_samples: usize,
    /// Fewer than 100 interior samples entered the maximum.
    pub coarse_grid: bool,
}

struct Nodes {
    z: Vec<f64>,
    nu: Vec<f64>,
    dnu: Vec<f64>,
    d2nu: Vec<f64>,
}

impl Nodes {
    fn shift(&mut self, dz: f64) {
        for z in &mut self.z {
            *z -= dz;
        }
    }

    fn interpolant(self) -> QuinticHermite {
        QuinticHermite::new(self.z, self.nu, self.dnu, self.d2nu)
    }
}

fn check_sonic(params: &WaveParameters) -> Result<()> {
    let sonic = 1.0 / params.epsilon;
    if (params.s - sonic).abs() > 1e-12 * sonic {
        return Err(Error::Speed {
            speed: params.s,
            reason: format!("this construction needs s = 1/eps = {sonic}"),
        });
    }
    Ok(())
}

/// Smooth subsonic front in the parabolic regime, `s*(eps) <= s < 1/eps`.
///
/// Speeds below `s*` fail with [`Error::NoMonotoneFront`] before any
/// integration: the discriminant at `nu = 0` is negative there and the
/// decay roots are complex.
pub fn build_parabolic(
    params: &WaveParameters,
    g: &GrowthFunction,
    opts: &ProfileOptions,
) -> Result<FrontProfile> {
    if params.regime != Regime::Parabolic {
        return Err(Error::Regime {
            expected: "parabolic",
            actual: params.regime,
        });
    }
    let eps = params.epsilon;
    let s = params.s;
    let e2 = eps * eps;
    if s <= 0.0 || e2 * s * s >= 1.0 - dispersion::DEGENERATE_TOL {
        return Err(Error::Speed {
            speed: s,
            reason: format!("smooth parabolic fronts need 0 < s < 1/eps = {}", 1.0 / eps),
        });
    }
    let discriminant = dispersion::discriminant_zero(eps, s, g);
    if discriminant < -1e-12 * g.fprime0() {
        return Err(Error::NoMonotoneFront {
            speed: s,
            discriminant,
            detail: format!(
                "characteristic roots at nu = 0 are complex below s* = {}",
                params.s_star
            ),
        });
    }
    let damping = 1.0 - e2 * s * s;
    // Any monotone front keeps p / nu below the smaller decay root, hence
    // below the mean of the two roots.
    let mean_root = s * (1.0 - e2 * g.fprime0()) / (2.0 * damping);

    let dp = |nu: f64, p: f64| ((1.0 - e2 * g.df(nu)) * s * p - g.f(nu)) / (damping * p);
    let rhs = |nu: f64, y: &[f64; 2]| [dp(nu, y[0]), -1.0 / y[0]];
    let event = |nu: f64, y: &[f64; 2]| (2.0 * mean_root * nu - y[0]).min(y[0]);

    let d0 = opts.delta0;
    let start = [params.lambda_prime * d0, 0.0];
    let (traj, term) = integrate(rhs, 1.0 - d0, start, d0, &opts.ode, Some(event))?;

    if term == Termination::Event {
        let (nu, y) = traj.last();
        return Err(Error::NoMonotoneFront {
            speed: s,
            discriminant,
            detail: format!(
                "orbit leaves 0 < p <= 2 lambda nu at nu = {nu:.3e} (p = {:.3e}); the tail oscillates",
                y[0]
            ),
        });
    }
    let mut nodes = Nodes {
        z: traj.y.iter().map(|y| y[1]).collect(),
        nu: traj.t.clone(),
        dnu: traj.y.iter().map(|y| -y[0]).collect(),
        d2nu: traj
            .t
            .iter()
            .zip(&traj.y)
            .map(|(&nu, y)| y[0] * dp(nu, y[0]))
            .collect(),
    };
    dedup_nodes(&mut nodes);
    let profile = finish_smooth(ProfileKind::SmoothParabolic, *params, nodes, opts)?;
    check_residual(&profile, g, opts)?;
    Ok(profile)
}

/// Weak front at the sonic speed `s = 1/eps` in the parabolic regime.
pub fn build_weak_sonic(
    params: &WaveParameters,
    g: &GrowthFunction,
    opts: &ProfileOptions,
) -> Result<FrontProfile> {
    if params.regime != Regime::Parabolic {
        return Err(Error::Regime {
            expected: "parabolic",
            actual: params.regime,
        });
    }
    check_sonic(params)?;
    let eps = params.epsilon;
    let e2 = eps * eps;
    let slope = |nu: f64| -eps * g.f(nu) / (1.0 - e2 * g.df(nu));
    let curvature = |nu: f64| {
        let denom = 1.0 - e2 * g.df(nu);
        let ds = -eps * (g.df(nu) * denom + e2 * g.f(nu) * g.d2f(nu)) / (denom * denom);
        ds * slope(nu)
    };
    let nodes = first_order_nodes(slope, curvature, 0.5, opts, opts.delta0)?;
    finish_smooth(ProfileKind::WeakSonic, *params, nodes, opts)
}

/// Front at `s = 1/eps` in the critical or hyperbolic regime.
///
/// Hyperbolic regime: `nu` decreases from 1 to `theta` and jumps to 0 at
/// `z = 0`. Critical regime: `theta = 0` and the front reaches 0 with the
/// finite slope `F'(0) / (eps F''(0))`, at `z = 0`.
pub fn build_hyperbolic(
    params: &WaveParameters,
    g: &GrowthFunction,
    opts: &ProfileOptions,
) -> Result<FrontProfile> {
    if params.regime == Regime::Parabolic {
        return Err(Error::Regime {
            expected: "critical or hyperbolic",
            actual: params.regime,
        });
    }
    check_sonic(params)?;
    let eps = params.epsilon;
    let e2 = eps * eps;
    let theta = params.theta.unwrap_or(0.0);
    let slope = |nu: f64| eps * g.f(nu) / (e2 * g.df(nu) - 1.0);
    let curvature = |nu: f64| {
        let denom = e2 * g.df(nu) - 1.0;
        let ds = eps * (g.df(nu) * denom - e2 * g.f(nu) * g.d2f(nu)) / (denom * denom);
        ds * slope(nu)
    };
    let critical = params.regime == Regime::Critical;
    let stop_level = if critical { opts.tol_end } else { theta };
    let mut nodes = first_order_nodes(slope, curvature, 0.5 * (1.0 + theta), opts, stop_level)?;

    let last = nodes.z.len() - 1;
    let edge = if critical {
        // Close the remaining gap with the local slope; the error is O(tol_end^2).
        nodes.z[last] + nodes.nu[last] / (-nodes.dnu[last])
    } else {
        if (nodes.nu[last] - theta).abs() > 1e-8 {
            return Err(Error::Event(format!(
                "front stopped at nu = {} instead of theta = {theta}",
                nodes.nu[last]
            )));
        }
        nodes.nu[last] = theta;
        nodes.z[last]
    };
    nodes.shift(edge);

    let kind = if critical {
        ProfileKind::ContinuousCritical
    } else {
        ProfileKind::DiscontinuousHyperbolic
    };
    let node_end = nodes.z[nodes.z.len() - 1];
    let end_slope = nodes.dnu[nodes.dnu.len() - 1];
    let end_value = nodes.nu[nodes.nu.len() - 1];
    let interp = nodes.interpolant();

    let k_lo = (interp.x_min() / opts.dz).ceil() as i64;
    let k_hi = (opts.pad / opts.dz).floor() as i64;
    let z: Vec<f64> = (k_lo..=k_hi).map(|k| k as f64 * opts.dz).collect();
    let nu = z
        .iter()
        .map(|&zz| edge_eval(&interp, zz, node_end, end_value, end_slope, critical).0)
        .collect();

    Ok(FrontProfile {
        kind,
        params: *params,
        z,
        nu,
        jump_location: (!critical).then_some(0.0),
        shift_convention: ShiftConvention::JumpAtOrigin,
        support_edge: Some(0.0),
        repr: Repr::Nodes(interp),
    })
}

/// Smooth supersonic front, `s > 1/eps`, with its phase-plane orbit.
pub fn build_supersonic(
    params: &WaveParameters,
    g: &GrowthFunction,
    opts: &ProfileOptions,
) -> Result<(FrontProfile, PhaseOrbit)> {
    let k = params.k_super.ok_or_else(|| Error::Speed {
        speed: params.s,
        reason: format!("supersonic fronts need s > 1/eps = {}", 1.0 / params.epsilon),
    })?;
    let eps = params.epsilon;
    let e2 = eps * eps;
    let s = params.s;
    let lead = e2 * s * s - 1.0;
    let lambda = dispersion::supersonic_slope(eps, s, g)?;

    let dp = |v: f64, p: f64| ((e2 * g.df(v) - 1.0) * s + g.f(v) / p) / lead;
    let rhs = |v: f64, y: &[f64; 2]| [dp(v, y[0]), 1.0 / y[0]];
    let event = |_: f64, y: &[f64; 2]| y[0];
    let d0 = opts.delta0;
    let (traj, term) = integrate(rhs, d0, [lambda * d0, 0.0], 1.0 - d0, &opts.ode, Some(event))?;
    if term == Termination::Event {
        let (v, y) = traj.last();
        return Err(Error::Trapping {
            v,
            p: y[0],
            bound: 0.0,
        });
    }

    let orbit = PhaseOrbit {
        v: traj.t.clone(),
        p: traj.y.iter().map(|y| y[0]).collect(),
        lambda_unstable: lambda,
        k,
    };
    for (&v, &p) in orbit.v.iter().zip(&orbit.p) {
        let bound = (lambda * v).min(k * g.f(v));
        if p > bound + 1e-8 || p < -1e-8 {
            return Err(Error::Trapping { v, p, bound });
        }
    }

    // nu(z) = V(-z): reverse the node order so z increases.
    let n = traj.t.len();
    let mut nodes = Nodes {
        z: (0..n).rev().map(|i| -traj.y[i][1]).collect(),
        nu: (0..n).rev().map(|i| traj.t[i]).collect(),
        dnu: (0..n).rev().map(|i| -traj.y[i][0]).collect(),
        d2nu: (0..n)
            .rev()
            .map(|i| traj.y[i][0] * dp(traj.t[i], traj.y[i][0]))
            .collect(),
    };
    dedup_nodes(&mut nodes);
    let profile = finish_smooth(ProfileKind::SmoothSupersonic, *params, nodes, opts)?;
    check_residual(&profile, g, opts)?;
    Ok((profile, orbit))
}

/// Minimal-speed front for `eps`, whatever the regime.
pub fn build_minimal(epsilon: f64, g: &GrowthFunction, opts: &ProfileOptions) -> Result<FrontProfile> {
    let params = WaveParameters::minimal(epsilon, g)?;
    match params.regime {
        Regime::Parabolic => build_parabolic(&params, g, opts),
        Regime::Critical | Regime::Hyperbolic => build_hyperbolic(&params, g, opts),
    }
}

/// Front at the speed in `params`, choosing the construction from the regime
/// and the position of `s` relative to the sonic speed `1/eps`. The phase
/// orbit is returned for supersonic speeds.
pub fn build_front(
    params: &WaveParameters,
    g: &GrowthFunction,
    opts: &ProfileOptions,
) -> Result<(FrontProfile, Option<PhaseOrbit>)> {
    let sonic = 1.0 / params.epsilon;
    let at_sonic = (params.s - sonic).abs() <= 1e-12 * sonic;
    if params.s > sonic && !at_sonic {
        let (profile, orbit) = build_supersonic(params, g, opts)?;
        return Ok((profile, Some(orbit)));
    }
    let profile = match (params.regime, at_sonic) {
        (Regime::Parabolic, false) => build_parabolic(params, g, opts)?,
        (Regime::Parabolic, true) => build_weak_sonic(params, g, opts)?,
        (_, true) => build_hyperbolic(params, g, opts)?,
        (_, false) => {
            return Err(Error::Speed {
                speed: params.s,
                reason: format!("no front below the minimal speed {sonic}"),
            })
        }
    };
    Ok((profile, None))
}

/// Integrates `nu' = slope(nu)` from `nu(0) = start` forward until `nu`
/// reaches `stop_level` and backward until `nu` reaches `1 - delta0`.
fn first_order_nodes<S, C>(
    slope: S,
    curvature: C,
    start: f64,
    opts: &ProfileOptions,
    stop_level: f64,
) -> Result<Nodes>
where
    S: Fn(f64) -> f64,
    C: Fn(f64) -> f64,
{
    let rhs = |_: f64, y: &[f64; 1]| [slope(y[0])];
    let top = 1.0 - opts.delta0;
    let far = 1e5;
    let (back, bt) = integrate(rhs, 0.0, [start], -far, &opts.ode, Some(|_: f64, y: &[f64; 1]| top - y[0]))?;
    let (fwd, ft) = integrate(rhs, 0.0, [start], far, &opts.ode, Some(|_: f64, y: &[f64; 1]| y[0] - stop_level))?;
    if bt != Termination::Event || ft != Termination::Event {
        return Err(Error::Event("front end levels were not reached".into()));
    }
    let mut z = Vec::with_capacity(back.t.len() + fwd.t.len());
    let mut nu = Vec::with_capacity(z.capacity());
    for i in (1..back.t.len()).rev() {
        z.push(back.t[i]);
        nu.push(back.y[i][0]);
    }
    z.extend_from_slice(&fwd.t);
    nu.extend(fwd.y.iter().map(|y| y[0]));
    let mut nodes = Nodes {
        dnu: nu.iter().map(|&v| slope(v)).collect(),
        d2nu: nu.iter().map(|&v| curvature(v)).collect(),
        z,
        nu,
    };
    dedup_nodes(&mut nodes);
    Ok(nodes)
}

/// Drops nodes that are not strictly increasing in `z` (event bisection can
/// land within rounding of the previous node).
fn dedup_nodes(nodes: &mut Nodes) {
    let mut keep = vec![true; nodes.z.len()];
    let mut last = f64::NEG_INFINITY;
    for (i, &z) in nodes.z.iter().enumerate() {
        if z <= last + 1e-14 * z.abs().max(1.0) {
            keep[i] = false;
        } else {
            last = z;
        }
    }
    let mut it = keep.iter();
    nodes.z.retain(|_| *it.next().unwrap());
    let mut it = keep.iter();
    nodes.nu.retain(|_| *it.next().unwrap());
    let mut it = keep.iter();
    nodes.dnu.retain(|_| *it.next().unwrap());
    let mut it = keep.iter();
    nodes.d2nu.retain(|_| *it.next().unwrap());
}

fn finish_smooth(
    kind: ProfileKind,
    params: WaveParameters,
    mut nodes: Nodes,
    opts: &ProfileOptions,
) -> Result<FrontProfile> {
    if nodes.z.len() < 4 {
        return Err(Error::Integration("too few nodes on the front".into()));
    }
    let probe = QuinticHermite::new(
        nodes.z.clone(),
        nodes.nu.clone(),
        nodes.dnu.clone(),
        nodes.d2nu.clone(),
    );
    let half = crossing(&probe, 0.5)?;
    nodes.shift(half);
    let interp = nodes.interpolant();
    let k_lo = (interp.x_min() / opts.dz).ceil() as i64;
    let k_hi = (interp.x_max() / opts.dz).floor() as i64;
    let z: Vec<f64> = (k_lo..=k_hi).map(|k| k as f64 * opts.dz).collect();
    let nu = z.iter().map(|&zz| interp.eval(zz)).collect();
    Ok(FrontProfile {
        kind,
        params,
        z,
        nu,
        jump_location: None,
        shift_convention: ShiftConvention::HalfLevelAtOrigin,
        support_edge: None,
        repr: Repr::Nodes(interp),
    })
}

fn crossing(interp: &QuinticHermite, level: f64) -> Result<f64> {
    bisect(
        |z| interp.eval(z) - level,
        interp.x_min(),
        interp.x_max(),
        0.0,
        1e-14,
    )
}

fn edge_eval(
    interp: &QuinticHermite,
    z: f64,
    node_end: f64,
    end_value: f64,
    end_slope: f64,
    continuous: bool,
) -> (f64, f64) {
    if z <= node_end {
        let (v, d, _) = interp.eval3(z);
        (v, d)
    } else if continuous && z < 0.0 {
        ((end_value + end_slope * (z - node_end)).max(0.0), end_slope)
    } else {
        (0.0, 0.0)
    }
}

fn check_residual(profile: &FrontProfile, g: &GrowthFunction, opts: &ProfileOptions) -> Result<()> {
    if let Some(tol) = opts.residual_tol {
        let r = residual(profile, g)?;
        if r.max_abs > tol {
            return Err(Error::Integration(format!(
                "profile residual {:.3e} exceeds {tol:e}; refine dz",
                r.max_abs
            )));
        }
    }
    Ok(())
}

impl FrontProfile {
    /// Profile from raw samples; evaluation interpolates linearly.
    pub fn from_samples(
        kind: ProfileKind,
        params: WaveParameters,
        z: Vec<f64>,
        nu: Vec<f64>,
        jump_location: Option<f64>,
        shift_convention: ShiftConvention,
    ) -> Result<Self> {
        if z.len() != nu.len() || z.len() < 2 {
            return Err(Error::Shape(format!(
                "need matching z and nu with at least two samples, got {} and {}",
                z.len(),
                nu.len()
            )));
        }
        if z.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Shape("z must be strictly increasing".into()));
        }
        Ok(Self {
            kind,
            params,
            z,
            nu,
            jump_location,
            shift_convention,
            support_edge: jump_location,
            repr: Repr::Samples,
        })
    }

    pub fn dz(&self) -> f64 {
        self.z[1] - self.z[0]
    }

    /// Right end of the support for fronts that vanish identically ahead.
    pub fn support_edge(&self) -> Option<f64> {
        self.support_edge
    }

    /// `(nu, nu')` at any `z`, extending the sampled range with the
    /// exponential tails set by the end samples.
    pub fn eval_with_slope(&self, z: f64) -> (f64, f64) {
        match &self.repr {
            Repr::Nodes(interp) => {
                if let Some(edge) = self.support_edge {
                    if z > edge {
                        return (0.0, 0.0);
                    }
                }
                if z < interp.x_min() {
                    let (v, d, _) = interp.eval3(interp.x_min());
                    let gap = 1.0 - v;
                    if gap <= 0.0 {
                        return (1.0, 0.0);
                    }
                    let rate = -d / gap;
                    let tail = gap * (rate * (z - interp.x_min())).exp();
                    return (1.0 - tail, -rate * tail);
                }
                if z > interp.x_max() {
                    let (v, d, _) = interp.eval3(interp.x_max());
                    if self.support_edge.is_some() {
                        let end = self.support_edge.unwrap();
                        let lin = v + d * (z - interp.x_max());
                        let continuous = self.kind == ProfileKind::ContinuousCritical;
                        return if continuous && z < end { (lin.max(0.0), d) } else { (0.0, 0.0) };
                    }
                    if v <= 0.0 {
                        return (0.0, 0.0);
                    }
                    let rate = -d / v;
                    let tail = v * (-rate * (z - interp.x_max())).exp();
                    return (tail, -rate * tail);
                }
                let (v, d, _) = interp.eval3(z);
                (v, d)
            }
            Repr::Samples => {
                let n = self.z.len();
                if z <= self.z[0] {
                    return (self.nu[0], 0.0);
                }
                if z >= self.z[n - 1] {
                    return (self.nu[n - 1], 0.0);
                }
                let i = self.z.partition_point(|&zi| zi <= z) - 1;
                let h = self.z[i + 1] - self.z[i];
                let d = (self.nu[i + 1] - self.nu[i]) / h;
                (self.nu[i] + d * (z - self.z[i]), d)
            }
        }
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.eval_with_slope(z).0
    }

    pub fn slope(&self, z: f64) -> f64 {
        self.eval_with_slope(z).1
    }

    /// `z` where the profile crosses `level` (first crossing for sampled data).
    pub fn level_crossing(&self, level: f64) -> Option<f64> {
        match &self.repr {
            Repr::Nodes(interp) => {
                let lo = interp.x_min();
                let hi = self.support_edge.unwrap_or(interp.x_max()).min(interp.x_max());
                if !(self.eval(lo) > level && self.eval(hi) <= level) {
                    return None;
                }
                bisect(|z| self.eval(z) - level, lo, hi, 0.0, 1e-14).ok()
            }
            Repr::Samples => {
                let i = self.nu.iter().position(|&v| v < level)?;
                if i == 0 {
                    return None;
                }
                let (a, b) = (self.nu[i - 1], self.nu[i]);
                Some(self.z[i - 1] + (a - level) / (a - b) * (self.z[i] - self.z[i - 1]))
            }
        }
    }

    /// Whether samples never increase by more than `slack`.
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.nu.windows(2).all(|w| w[1] <= w[0] + slack)
    }
}

/// Max central-difference residual of the profile equation over interior
/// samples. Fronts with a support edge are checked on `z < edge - 2 dz`.
pub fn residual(profile: &FrontProfile, g: &GrowthFunction) -> Result<Residual> {
    let n = profile.z.len();
    if n < 3 {
        return Err(Error::Shape("residual needs at least three samples".into()));
    }
    let eps = profile.params.epsilon;
    let s = profile.params.s;
    let e2 = eps * eps;
    let lead = e2 * s * s - 1.0;
    let limit = profile
        .support_edge()
        .map(|e| e - 2.0 * profile.dz())
        .unwrap_or(f64::INFINITY);

    let mut max_abs: f64 = 0.0;
    let mut count = 0;
    for i in 1..n - 1 {
        if profile.z[i + 1] > limit {
            break;
        }
        let h1 = profile.z[i] - profile.z[i - 1];
        let h2 = profile.z[i + 1] - profile.z[i];
        let (a, b, c) = (profile.nu[i - 1], profile.nu[i], profile.nu[i + 1]);
        let d1 = (c - a) / (h1 + h2);
        let d2 = 2.0 * (h1 * c - (h1 + h2) * b + h2 * a) / (h1 * h2 * (h1 + h2));
        let r = lead * d2 - (1.0 - e2 * g.df(b)) * s * d1 - g.f(b);
        max_abs = max_abs.max(r.abs());
        count += 1;
    }
    Ok(Residual {
        max_abs,
        interior_samples: count,
        coarse_grid: count < 100,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn logistic() -> GrowthFunction {
        GrowthFunction::logistic(1.0).unwrap()
    }

    fn tail_rate(p: &FrontProfile, at: f64) -> f64 {
        // log-slope measured on the sampled tail around nu = at
        let i = p.nu.iter().position(|&v| v < at).unwrap();
        let j = i + (1.0 / p.dz()) as usize;
        -(p.nu[j].ln() - p.nu[i].ln()) / (p.z[j] - p.z[i])
    }

    #[test]
    fn parabolic_minimal_front() {
        let g = logistic();
        let params = WaveParameters::new(0.5, 1.6, &g).unwrap();
        let p = build_parabolic(&params, &g, &ProfileOptions::default()).unwrap();
        assert_eq!(p.kind, ProfileKind::SmoothParabolic);
        assert!((p.eval(0.0) - 0.5).abs() < 1e-12);
        let i0 = p.z.iter().position(|&z| z == 0.0).unwrap();
        assert!((p.nu[i0] - 0.5).abs() < 1e-12);
        assert!(p.is_monotone(1e-12));
        assert!(p.nu[0] > 1.0 - 1e-6 && *p.nu.last().unwrap() < 1e-6);
        assert!(p.nu.iter().all(|&v| (0.0..=1.0).contains(&v)));
        let rate = tail_rate(&p, 1e-5);
        let lambda = 5.0 / 3.0;
        assert!(rate <= lambda + 1e-6 && rate > 0.85 * lambda, "tail rate {rate}");
        assert!(residual(&p, &g).unwrap().max_abs < 1e-6);
    }

    #[test]
    fn below_minimal_speed_fails() {
        let g = logistic();
        let params = WaveParameters::new(0.5, 1.0, &g).unwrap();
        let err = build_parabolic(&params, &g, &ProfileOptions::default()).unwrap_err();
        assert!(matches!(err, Error::NoMonotoneFront { discriminant, .. } if discriminant < 0.0), "{err}");
    }

    #[test]
    fn near_classical_limit() {
        let g = logistic();
        let params = WaveParameters::new(0.01, 2.0, &g).unwrap();
        let p = build_parabolic(&params, &g, &ProfileOptions::default()).unwrap();
        let rate = tail_rate(&p, 1e-5);
        // roots of (eps^2 s^2 - 1) l^2 + (1 - eps^2) s l - 1 straddle 1
        assert!((rate - 1.0).abs() < 0.15, "tail rate {rate}");
    }

    #[test]
    fn parabolic_rejects_other_regimes() {
        let g = logistic();
        let h = WaveParameters::minimal(2.0, &g).unwrap();
        assert!(matches!(
            build_parabolic(&h, &g, &ProfileOptions::default()),
            Err(Error::Regime { .. })
        ));
        let sonic = WaveParameters::new(0.5, 2.0, &g).unwrap();
        assert!(matches!(
            build_parabolic(&sonic, &g, &ProfileOptions::default()),
            Err(Error::Speed { .. })
        ));
    }

    #[test]
    fn weak_sonic_front() {
        let g = logistic();
        let params = WaveParameters::new(0.5, 2.0, &g).unwrap();
        let p = build_weak_sonic(&params, &g, &ProfileOptions::default()).unwrap();
        assert_eq!(p.kind, ProfileKind::WeakSonic);
        assert!((p.slope(0.0) + 0.125).abs() < 1e-10);
        assert!(p.nu.windows(2).all(|w| w[1] < w[0]));
        // linearization at 0: nu' = -eps F'(0) / (1 - eps^2 F'(0)) nu
        let expected = 0.5 / 0.75;
        let rate = tail_rate(&p, 1e-5);
        assert!((rate - expected).abs() < 1e-3, "tail rate {rate}");
        let wrong = WaveParameters::new(0.5, 1.8, &g).unwrap();
        assert!(build_weak_sonic(&wrong, &g, &ProfileOptions::default()).is_err());
    }

    #[test]
    fn hyperbolic_front_shape() {
        let g = logistic();
        let params = WaveParameters::minimal(2.0, &g).unwrap();
        let p = build_hyperbolic(&params, &g, &ProfileOptions::default()).unwrap();
        assert_eq!(p.kind, ProfileKind::DiscontinuousHyperbolic);
        assert_eq!(p.jump_location, Some(0.0));
        let i0 = p.z.iter().position(|&z| z == 0.0).unwrap();
        assert!((p.nu[i0] - 0.75).abs() < 1e-8);
        assert!(p.nu[i0 + 1..].iter().all(|&v| v == 0.0));
        assert!(p.nu[0] >= 1.0 - 1e-6);
        assert!(p.is_monotone(1e-12));
        let r = residual(&p, &g).unwrap();
        assert!(r.max_abs < 1e-6 && !r.coarse_grid);
    }

    #[test]
    fn critical_front_matches_closed_form() {
        let g = logistic();
        let params = WaveParameters::minimal(1.0, &g).unwrap();
        let p = build_hyperbolic(&params, &g, &ProfileOptions::default()).unwrap();
        assert_eq!(p.kind, ProfileKind::ContinuousCritical);
        let err = p
            .z
            .iter()
            .zip(&p.nu)
            .map(|(&z, &v)| (v - (1.0 - (z / 2.0).exp()).max(0.0)).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "max error {err}");
    }

    #[test]
    fn hyperbolic_needs_sonic_speed() {
        let g = logistic();
        let params = WaveParameters::new(2.0, 0.7, &g).unwrap();
        assert!(matches!(
            build_hyperbolic(&params, &g, &ProfileOptions::default()),
            Err(Error::Speed { .. })
        ));
        let parabolic = WaveParameters::minimal(0.5, &g).unwrap();
        assert!(build_hyperbolic(&parabolic, &g, &ProfileOptions::default()).is_err());
    }

    #[test]
    fn supersonic_orbit_trapped() {
        let g = logistic();
        let params = WaveParameters::new(2f64.sqrt(), 1.0, &g).unwrap();
        let (p, orbit) = build_supersonic(&params, &g, &ProfileOptions::default()).unwrap();
        assert_eq!(p.kind, ProfileKind::SmoothSupersonic);
        assert!((orbit.k - 2.0).abs() < 1e-14);
        assert!((orbit.lambda_unstable - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-14);
        assert!(orbit.max_trapping_violation(&g) <= 1e-8);
        assert!(orbit.q_residual().iter().all(|&q| q <= 1e-8));
        assert!(orbit.r_residual(&g).iter().all(|&r| r <= 1e-8));
        assert!(orbit.p.last().unwrap().abs() < 1e-6);
        assert!(p.is_monotone(1e-12));
        assert!((p.eval(0.0) - 0.5).abs() < 1e-12);

        let sub = WaveParameters::minimal(0.5, &g).unwrap();
        assert!(build_supersonic(&sub, &g, &ProfileOptions::default()).is_err());
    }

    #[test]
    fn residual_of_constants() {
        let g = logistic();
        let params = WaveParameters::minimal(0.5, &g).unwrap();
        let z: Vec<f64> = (0..200).map(|i| i as f64 * 0.1).collect();
        for c in [0.0, 1.0] {
            let p = FrontProfile::from_samples(
                ProfileKind::SmoothParabolic,
                params,
                z.clone(),
                vec![c; 200],
                None,
                ShiftConvention::HalfLevelAtOrigin,
            )
            .unwrap();
            let r = residual(&p, &g).unwrap();
            assert_eq!(r.max_abs, 0.0);
            assert!(!r.coarse_grid);
        }
        let small = FrontProfile::from_samples(
            ProfileKind::SmoothParabolic,
            params,
            z[..50].to_vec(),
            vec![0.0; 50],
            None,
            ShiftConvention::HalfLevelAtOrigin,
        )
        .unwrap();
        assert!(residual(&small, &g).unwrap().coarse_grid);
    }

    #[test]
    fn evaluation_extends_tails() {
        let g = logistic();
        let p = build_minimal(0.5, &g, &ProfileOptions::default()).unwrap();
        let (lo, hi) = (p.z[0], *p.z.last().unwrap());
        assert!(p.eval(lo - 10.0) > p.eval(lo) && p.eval(lo - 10.0) < 1.0);
        assert!(p.eval(hi + 10.0) < p.eval(hi) && p.eval(hi + 10.0) > 0.0);
        let h = build_minimal(2.0, &g, &ProfileOptions::default()).unwrap();
        assert_eq!(h.eval(0.5), 0.0);
        assert!((h.eval(-1e-9) - 0.75).abs() < 1e-8);
        assert!((h.level_crossing(0.9).unwrap() - h.z[h.nu.iter().position(|&v| v < 0.9).unwrap()]).abs() < h.dz());
    }
}
