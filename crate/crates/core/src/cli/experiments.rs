//! Experiment drivers shared by the command-line front end, the examples and
//! the acceptance suite.

use crate::diagnostics::{
    compare_profile, fit_speed, front_position, jump_sharpness, EnergyReport, EnergyWeights, JumpSharpness,
    ProfileComparison, SpeedEstimate,
};
use crate::dispersion::{Regime, WaveParameters};
use crate::error::{Error, Result};
use crate::growth::GrowthFunction;
use crate::profile::{build_minimal, FrontProfile, ProfileOptions};
use crate::solver::{
    init_step_state, linearized_run_with, run, GridSpec, KineticState, PerturbationSource, RunOptions,
};

/// Lab-frame run from step initial data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationSetup {
    pub epsilon: f64,
    pub grid: GridSpec,
    pub t_end: f64,
    pub cfl_fraction: f64,
    /// Interval between front-position samples.
    pub snapshot_every: f64,
    pub level: f64,
    pub discard_fraction: f64,
}

impl SimulationSetup {
    /// Step data on `[-30, 120]` with `dx = 0.05`, as in the three panels of
    /// the reference experiment.
    pub fn reference(epsilon: f64, t_end: f64) -> Self {
        Self {
            epsilon,
            grid: GridSpec::with_dx(-30.0, 120.0, 0.05).expect("reference grid"),
            t_end,
            cfl_fraction: 0.9,
            snapshot_every: 1.0,
            level: 0.5,
            discard_fraction: 0.5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimulationOutcome {
    pub setup: SimulationSetup,
    pub regime: Regime,
    pub s_star: f64,
    pub speed: SpeedEstimate,
    /// Smallest and largest density seen over the whole run.
    pub rho_range: (f64, f64),
    /// Misfit against the minimal front (critical regime only).
    pub profile_error: Option<ProfileComparison>,
    /// Jump resolution (hyperbolic regime only).
    pub sharpness: Option<JumpSharpness>,
    pub theta: Option<f64>,
    pub final_state: KineticState,
}

/// Runs the step experiment; `observer` sees every snapshot.
pub fn simulate<O>(setup: &SimulationSetup, g: &GrowthFunction, mut observer: O) -> Result<SimulationOutcome>
where
    O: FnMut(f64, &KineticState),
{
    let params = WaveParameters::minimal(setup.epsilon, g)?;
    let state = init_step_state(setup.grid, setup.epsilon)?;
    let x = setup.grid.centers();
    let opts = RunOptions {
        cfl_fraction: setup.cfl_fraction,
        snapshot_every: Some(setup.snapshot_every),
        ..RunOptions::default()
    };
    let mut times = Vec::new();
    let mut positions = Vec::new();
    let mut lo: f64 = 0.0;
    let mut hi: f64 = 1.0;
    let mut failure = None;
    let end = run(state, setup.epsilon, g, setup.t_end, &opts, |t, st| {
        let rho = st.density();
        for &r in &rho {
            lo = lo.min(r);
            hi = hi.max(r);
        }
        match front_position(&x, &rho, setup.level) {
            Ok(p) => {
                times.push(t);
                positions.push(p);
            }
            Err(e) => {
                failure.get_or_insert(e);
            }
        }
        observer(t, st);
    })?;
    if lo.is_nan() || hi.is_nan() || end.f_plus.iter().any(|v| !v.is_finite()) {
        return Err(Error::Integration("density became non-finite".into()));
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let edge = setup.grid.b - 1.0;
    if let Some(&p) = positions.iter().find(|&&p| p > edge) {
        return Err(Error::NoFront(format!(
            "front at x = {p} reached the right boundary {}",
            setup.grid.b
        )));
    }
    let speed = fit_speed(times, positions, setup.level, setup.discard_fraction)?;
    let rho = end.density();
    let (profile_error, sharpness) = match params.regime {
        Regime::Critical => {
            let profile = build_minimal(setup.epsilon, g, &ProfileOptions::default())?;
            (Some(compare_profile(&x, &rho, &profile)?), None)
        }
        Regime::Hyperbolic => (None, Some(jump_sharpness(&x, &rho, params.theta.unwrap_or(0.0))?)),
        Regime::Parabolic => (None, None),
    };
    Ok(SimulationOutcome {
        setup: *setup,
        regime: params.regime,
        s_star: params.s_star,
        speed,
        rho_range: (lo, hi),
        profile_error,
        sharpness,
        theta: params.theta,
        final_state: end,
    })
}

/// Perturbation of the minimal front evolved in the moving frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilitySetup {
    pub epsilon: f64,
    /// Moving-frame grid.
    pub grid: GridSpec,
    pub t_end: f64,
    pub cfl_fraction: f64,
    /// Interval between energy reports.
    pub report_every: f64,
    /// Gaussian `amplitude * exp(-((z - center) / width)^2 / 2)`, cut at 6 widths.
    pub amplitude: f64,
    pub width: f64,
    /// Centre of the perturbation; `None` puts it at the half-level point.
    pub center: Option<f64>,
    pub source: PerturbationSource,
}

impl StabilitySetup {
    pub fn new(epsilon: f64, grid: GridSpec, t_end: f64) -> Self {
        Self {
            epsilon,
            grid,
            t_end,
            cfl_fraction: 0.9,
            report_every: 0.5,
            amplitude: 0.01,
            width: 2.0,
            center: None,
            source: PerturbationSource::Linear,
        }
    }

    pub fn initial_perturbation(&self, profile: &FrontProfile) -> Vec<f64> {
        let center = self
            .center
            .or_else(|| profile.level_crossing(0.5))
            .unwrap_or(0.0);
        self.grid
            .centers()
            .iter()
            .map(|&z| {
                let r = (z - center) / self.width;
                if r.abs() > 6.0 {
                    0.0
                } else {
                    self.amplitude * (-0.5 * r * r).exp()
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityRecord {
    pub t: f64,
    /// `1/2 int (u^2 + v^2) e^{2 phi} dz`.
    pub lyapunov: f64,
    /// `max |u|`.
    pub sup_norm: f64,
    /// Full energy set, parabolic regime only.
    pub energy: Option<EnergyReport>,
}

#[derive(Debug, Clone)]
pub struct StabilityOutcome {
    pub setup: StabilitySetup,
    pub profile: FrontProfile,
    pub records: Vec<StabilityRecord>,
}

impl StabilityOutcome {
    /// Largest relative increase per unit time of a series between reports.
    pub fn worst_growth<F: Fn(&StabilityRecord) -> f64>(&self, value: F) -> f64 {
        self.records
            .windows(2)
            .map(|w| {
                let (a, b) = (value(&w[0]), value(&w[1]));
                if a <= 0.0 {
                    if b > 0.0 {
                        f64::INFINITY
                    } else {
                        0.0
                    }
                } else {
                    (b - a) / a / (w[1].t - w[0].t)
                }
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Evolves a Gaussian perturbation of the minimal front and reports the
/// weighted energies every `report_every`.
///
/// Every solver step is observed so that `d_t u` can be taken as a forward
/// difference over one step at each report time.
pub fn run_stability(setup: &StabilitySetup, g: &GrowthFunction) -> Result<StabilityOutcome> {
    if !(setup.report_every > 0.0) {
        return Err(Error::InvalidParameter {
            name: "report_every",
            reason: format!("must be positive, got {}", setup.report_every),
        });
    }
    let profile = build_minimal(setup.epsilon, g, &ProfileOptions::default())?;
    let params = profile.params;
    let z = setup.grid.centers();
    let u0 = setup.initial_perturbation(&profile);
    let v0 = vec![0.0; u0.len()];

    let weights = match params.regime {
        Regime::Parabolic => Some(EnergyWeights::new(&z, &profile, g)?),
        _ => None,
    };
    let phi = match &weights {
        Some(w) => w.phi.clone(),
        None => crate::diagnostics::weight_phi(&z, &profile, g, profile.support_edge().unwrap_or(0.0))?,
    };

    let dt_max = setup.cfl_fraction * setup.grid.dx / (params.s + 1.0 / params.epsilon);
    let per_report = (setup.report_every / dt_max).ceil().max(1.0);
    let dt = setup.report_every / per_report;
    let per_report = per_report as u64;
    let opts = RunOptions {
        cfl_fraction: setup.cfl_fraction,
        snapshot_every: Some(dt),
        ..RunOptions::default()
    };

    let mut records = Vec::new();
    let mut index = 0u64;
    let mut pending: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    let mut failure = None;
    linearized_run_with(&profile, g, setup.grid, &u0, &v0, setup.t_end + dt, setup.source, &opts, |t, u, v| {
        if let Some((t0, u_prev, v_prev)) = pending.take() {
            let energy = weights
                .as_ref()
                .map(|w| w.report(t0, &u_prev, u, &v_prev, t - t0))
                .transpose();
            match energy {
                Ok(energy) => records.push(StabilityRecord {
                    t: t0,
                    lyapunov: crate::diagnostics::weighted_energy(&z, &u_prev, &v_prev, &phi),
                    sup_norm: u_prev.iter().fold(0.0, |m: f64, x| m.max(x.abs())),
                    energy,
                }),
                Err(e) => {
                    failure.get_or_insert(e);
                }
            }
        }
        if index.is_multiple_of(per_report) && t <= setup.t_end + 0.5 * dt {
            pending = Some((t, u.to_vec(), v.to_vec()));
        }
        index += 1;
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(StabilityOutcome {
        setup: *setup,
        profile,
        records,
    })
}

/// Same perturbation as [`run_stability`], evolved as the full kinetic
/// system in the lab frame. The perturbation is read back on the moving grid
/// by linear interpolation of `rho` and `j` at `x = z + s t`.
pub fn run_stability_lab(setup: &StabilitySetup, g: &GrowthFunction) -> Result<StabilityOutcome> {
    if !(setup.report_every > 0.0) {
        return Err(Error::InvalidParameter {
            name: "report_every",
            reason: format!("must be positive, got {}", setup.report_every),
        });
    }
    let profile = build_minimal(setup.epsilon, g, &ProfileOptions::default())?;
    let params = profile.params;
    let eps = params.epsilon;
    let s = params.s;
    let z = setup.grid.centers();
    let u0 = setup.initial_perturbation(&profile);

    let weights = match params.regime {
        Regime::Parabolic => Some(EnergyWeights::new(&z, &profile, g)?),
        _ => None,
    };
    let phi = match &weights {
        Some(w) => w.phi.clone(),
        None => crate::diagnostics::weight_phi(&z, &profile, g, profile.support_edge().unwrap_or(0.0))?,
    };

    let dx = setup.grid.dx;
    let dt_max = setup.cfl_fraction * eps * dx;
    let per_report = (setup.report_every / dt_max).ceil().max(1.0);
    let dt = setup.report_every / per_report;
    let per_report = per_report as u64;

    let reach = setup.grid.b + s * (setup.t_end + 2.0 * dt) + 2.0;
    let n_lab = ((reach - setup.grid.a) / dx).ceil() as usize;
    let lab = GridSpec::new(setup.grid.a, setup.grid.a + n_lab as f64 * dx, n_lab)?;
    let mut state = crate::solver::init_front_state(lab, &profile, g, 0.0);
    let x_lab = lab.centers();
    for (i, &x) in x_lab.iter().enumerate() {
        let u = sample_uniform(&z, &u0, x).unwrap_or(0.0);
        state.f_plus[i] += 0.5 * u;
        state.f_minus[i] += 0.5 * u;
    }
    let background: Vec<(f64, f64)> = z
        .iter()
        .map(|&zz| {
            let (nu, dnu) = profile.eval_with_slope(zz);
            (nu, eps.powi(3) * s * g.f(nu) + eps * (eps * eps * s * s - 1.0) * dnu)
        })
        .collect();
    let perturbation = |t: f64, st: &KineticState| -> (Vec<f64>, Vec<f64>) {
        let rho = st.density();
        let j = st.current();
        let mut u = Vec::with_capacity(z.len());
        let mut v = Vec::with_capacity(z.len());
        for (k, &zz) in z.iter().enumerate() {
            let x = zz + s * t;
            let r = sample_uniform(&x_lab, &rho, x).unwrap_or(f64::NAN);
            let c = sample_uniform(&x_lab, &j, x).unwrap_or(f64::NAN);
            u.push(r - background[k].0);
            v.push(c - background[k].1);
        }
        (u, v)
    };

    let opts = RunOptions {
        cfl_fraction: setup.cfl_fraction,
        snapshot_every: Some(dt),
        ..RunOptions::default()
    };
    let mut records = Vec::new();
    let mut index = 0u64;
    let mut pending: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    let mut failure = None;
    let mut visit = |t: f64, u: Vec<f64>, v: Vec<f64>| {
        if let Some((t0, u_prev, v_prev)) = pending.take() {
            let energy = weights
                .as_ref()
                .map(|w| w.report(t0, &u_prev, &u, &v_prev, t - t0))
                .transpose();
            match energy {
                Ok(energy) => records.push(StabilityRecord {
                    t: t0,
                    lyapunov: crate::diagnostics::weighted_energy(&z, &u_prev, &v_prev, &phi),
                    sup_norm: u_prev.iter().fold(0.0, |m: f64, x| m.max(x.abs())),
                    energy,
                }),
                Err(e) => {
                    failure.get_or_insert(e);
                }
            }
        }
        if index.is_multiple_of(per_report) && t <= setup.t_end + 0.5 * dt {
            pending = Some((t, u, v));
        }
        index += 1;
    };
    let (u, v) = perturbation(0.0, &state);
    visit(0.0, u, v);
    run(state, eps, g, setup.t_end + dt, &opts, |t, st| {
        let (u, v) = perturbation(t, st);
        visit(t, u, v);
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(StabilityOutcome {
        setup: *setup,
        profile,
        records,
    })
}

/// Linear interpolation on uniformly spaced nodes; `None` outside them.
fn sample_uniform(nodes: &[f64], values: &[f64], x: f64) -> Option<f64> {
    let n = nodes.len();
    if n < 2 || x < nodes[0] || x > nodes[n - 1] {
        return None;
    }
    let h = nodes[1] - nodes[0];
    let i = (((x - nodes[0]) / h).floor() as usize).min(n - 2);
    let w = (x - nodes[i]) / h;
    Some((1.0 - w) * values[i] + w * values[i + 1])
}
