//! Flux-limited finite-volume scheme for the two-velocity kinetic system
//!
//! ```text
//! d_t f+ + (1/eps) d_x f+ = (f- - f+) / (2 eps^2) + F(rho) / 2
//! d_t f- - (1/eps) d_x f- = (f+ - f-) / (2 eps^2) + F(rho) / 2
//! ```
//!
//! with `rho = f+ + f-`, and its moving-frame perturbation counterpart.
//!
//! Transport is upwind with minmod-limited slopes in flux-limiter form: the
//! interface value is the upwind cell value plus `(1 - c)` times the half-cell
//! slope, `c` being the Courant number. Relaxation and reaction are added with
//! one explicit Euler step evaluated on the state before transport.

use crate::error::{Error, Result};
use crate::growth::GrowthFunction;
use crate::profile::FrontProfile;

/// Uniform cell-centred grid on `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub a: f64,
    pub b: f64,
    pub n_cells: usize,
    pub dx: f64,
}

impl GridSpec {
    pub fn new(a: f64, b: f64, n_cells: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: format!("need finite a < b, got [{a}, {b}]"),
            });
        }
        if n_cells < 2 {
            return Err(Error::InvalidParameter {
                name: "n_cells",
                reason: format!("need at least 2 cells, got {n_cells}"),
            });
        }
        Ok(Self {
            a,
            b,
            n_cells,
            dx: (b - a) / n_cells as f64,
        })
    }

    /// Grid with spacing `dx`; `b - a` must be a whole number of cells.
    pub fn with_dx(a: f64, b: f64, dx: f64) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "dx",
                reason: format!("must be positive, got {dx}"),
            });
        }
        let cells = (b - a) / dx;
        let n = cells.round();
        if n < 2.0 || (cells - n).abs() > 1e-9 * n.max(1.0) {
            return Err(Error::InvalidParameter {
                name: "dx",
                reason: format!("(b - a) / dx = {cells} is not a whole number of cells >= 2"),
            });
        }
        Self::new(a, b, n as usize)
    }

    pub fn center(&self, i: usize) -> f64 {
        self.a + (i as f64 + 0.5) * self.dx
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.center(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KineticState {
    pub grid: GridSpec,
    pub t: f64,
    /// Right-movers, velocity `+1/eps`.
    pub f_plus: Vec<f64>,
    /// Left-movers, velocity `-1/eps`.
    pub f_minus: Vec<f64>,
}

impl KineticState {
    pub fn density(&self) -> Vec<f64> {
        density(self)
    }

    pub fn current(&self) -> Vec<f64> {
        current(self)
    }
}

/// `rho = f+ + f-` per cell.
pub fn density(state: &KineticState) -> Vec<f64> {
    state.f_plus.iter().zip(&state.f_minus).map(|(p, m)| p + m).collect()
}

/// `j = f+ - f-` per cell.
pub fn current(state: &KineticState) -> Vec<f64> {
    state.f_plus.iter().zip(&state.f_minus).map(|(p, m)| p - m).collect()
}

/// Minmod slope limiter; zero arguments count as a sign mismatch.
pub fn minmod(p: f64, q: f64) -> f64 {
    if p * q > 0.0 {
        p.abs().min(q.abs()) * p.signum()
    } else {
        0.0
    }
}

/// Step function initial data: `f+ = 1` for `x < 0`, `f- = 0`.
pub fn init_step_state(grid: GridSpec, epsilon: f64) -> Result<KineticState> {
    check_epsilon(epsilon)?;
    if !(grid.a < 0.0 && 0.0 < grid.b) {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: format!("step data needs a < 0 < b, got [{}, {}]", grid.a, grid.b),
        });
    }
    let f_plus = grid
        .centers()
        .iter()
        .map(|&x| if x < 0.0 { 1.0 } else { 0.0 })
        .collect();
    Ok(KineticState {
        grid,
        t: 0.0,
        f_plus,
        f_minus: vec![0.0; grid.n_cells],
    })
}

/// Kinetic state of the front `nu(x - x0)`, with current
/// `j = eps^3 s F(nu) + eps (eps^2 s^2 - 1) nu'` so that the front travels
/// without an initial transient.
pub fn init_front_state(
    grid: GridSpec,
    profile: &FrontProfile,
    g: &GrowthFunction,
    x0: f64,
) -> KineticState {
    let eps = profile.params.epsilon;
    let s = profile.params.s;
    let mut f_plus = Vec::with_capacity(grid.n_cells);
    let mut f_minus = Vec::with_capacity(grid.n_cells);
    for x in grid.centers() {
        let (nu, dnu) = profile.eval_with_slope(x - x0);
        let j = eps.powi(3) * s * g.f(nu) + eps * (eps * eps * s * s - 1.0) * dnu;
        f_plus.push(0.5 * (nu + j));
        f_minus.push(0.5 * (nu - j));
    }
    KineticState {
        grid,
        t: 0.0,
        f_plus,
        f_minus,
    }
}

/// Source switches and boundary inflow values.
///
/// Disabling both sources leaves pure transport. The default inflows
/// `f+(a) = 1/2`, `f-(b) = 0` match a front invading the state 0 from the
/// state 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOptions {
    pub relaxation: bool,
    pub reaction: bool,
    pub inflow_plus: f64,
    pub inflow_minus: f64,
}

impl Default for StepOptions {
    fn default() -> Self {
        Self {
            relaxation: true,
            reaction: true,
            inflow_plus: 0.5,
            inflow_minus: 0.0,
        }
    }
}

impl StepOptions {
    /// Transport only, with the default inflows.
    pub fn transport_only() -> Self {
        Self {
            relaxation: false,
            reaction: false,
            ..Self::default()
        }
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: format!("must be positive, got {epsilon}"),
        });
    }
    Ok(())
}

/// One transport step at signed Courant number `courant` (|courant| <= 1).
///
/// Upwind inflow takes the value `inflow`; the outflow ghost cell copies its
/// neighbour, so the slope there is zero.
pub fn advect(f: &[f64], courant: f64, inflow: f64) -> Vec<f64> {
    if courant >= 0.0 {
        advect_right(f, courant, inflow)
    } else {
        let reversed: Vec<f64> = f.iter().rev().copied().collect();
        let mut out = advect_right(&reversed, -courant, inflow);
        out.reverse();
        out
    }
}

fn advect_right(f: &[f64], c: f64, inflow: f64) -> Vec<f64> {
    let n = f.len();
    let limiter = 0.5 * (1.0 - c);
    let mut out = Vec::with_capacity(n);
    // the inflow ghost cell carries zero slope
    let mut face_left = inflow;
    let mut prev = inflow;
    for i in 0..n {
        let next = if i + 1 < n { f[i + 1] } else { f[i] };
        let face_right = f[i] + limiter * minmod(f[i] - prev, next - f[i]);
        out.push(f[i] - c * (face_right - face_left));
        face_left = face_right;
        prev = f[i];
    }
    out
}

/// One explicit step of the kinetic scheme with all source terms.
pub fn step(state: &KineticState, epsilon: f64, g: &GrowthFunction, dt: f64) -> Result<KineticState> {
    step_with(state, epsilon, g, dt, StepOptions::default())
}

/// [`step`] with selectable source terms.
pub fn step_with(
    state: &KineticState,
    epsilon: f64,
    g: &GrowthFunction,
    dt: f64,
    opts: StepOptions,
) -> Result<KineticState> {
    check_epsilon(epsilon)?;
    let limit = epsilon * state.grid.dx;
    if !(dt > 0.0 && dt < limit) {
        return Err(Error::Cfl { dt, limit });
    }
    let courant = dt / limit;
    let mut f_plus = advect(&state.f_plus, courant, opts.inflow_plus);
    let mut f_minus = advect(&state.f_minus, -courant, opts.inflow_minus);

    let relax = if opts.relaxation { 0.5 * dt / (epsilon * epsilon) } else { 0.0 };
    for i in 0..f_plus.len() {
        let (p, m) = (state.f_plus[i], state.f_minus[i]);
        let reaction = if opts.reaction { 0.5 * dt * g.f(p + m) } else { 0.0 };
        f_plus[i] += relax * (m - p) + reaction;
        f_minus[i] += relax * (p - m) + reaction;
    }
    Ok(KineticState {
        grid: state.grid,
        t: state.t + dt,
        f_plus,
        f_minus,
    })
}

/// Time stepping parameters shared by the lab-frame and moving-frame runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    /// `dt` as a fraction of the CFL limit, in (0, 1).
    pub cfl_fraction: f64,
    /// Observer interval; `None` observes only the final state.
    pub snapshot_every: Option<f64>,
    pub step: StepOptions,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            cfl_fraction: 0.9,
            snapshot_every: None,
            step: StepOptions::default(),
        }
    }
}

impl RunOptions {
    fn validate(&self) -> Result<()> {
        if !(self.cfl_fraction > 0.0 && self.cfl_fraction < 1.0) {
            return Err(Error::InvalidParameter {
                name: "cfl_fraction",
                reason: format!("must lie in (0, 1), got {}", self.cfl_fraction),
            });
        }
        if let Some(every) = self.snapshot_every {
            if !(every > 0.0 && every.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "snapshot_every",
                    reason: format!("must be positive, got {every}"),
                });
            }
        }
        Ok(())
    }
}

/// Step sequence from `t0` to `t_end` with steps of at most `dt_max`, landing
/// exactly on every snapshot time `t0 + k * every` (k >= 1) and on `t_end`.
#[derive(Debug, Clone)]
struct Clock {
    t0: f64,
    t_end: f64,
    dt_max: f64,
    every: Option<f64>,
    t: f64,
    k: u64,
}

impl Clock {
    fn new(t0: f64, t_end: f64, dt_max: f64, every: Option<f64>) -> Self {
        Self {
            t0,
            t_end,
            dt_max,
            every,
            t: t0,
            k: 1,
        }
    }

    /// Next step length and whether the step ends on an observed time.
    fn next(&mut self) -> Option<(f64, bool)> {
        let slack = 1e-10 * self.dt_max;
        if self.t >= self.t_end - slack {
            return None;
        }
        let mut snap = self.every.map_or(f64::INFINITY, |e| self.t0 + self.k as f64 * e);
        if snap >= self.t_end - slack {
            snap = self.t_end;
        }
        let gap = snap - self.t;
        if gap <= self.dt_max + slack {
            self.t = snap;
            self.k += 1;
            Some((gap, true))
        } else {
            self.t += self.dt_max;
            Some((self.dt_max, false))
        }
    }
}

/// Advances `state` to `t_end` with `dt = cfl_fraction * eps * dx`. The
/// observer sees the state at each snapshot time and at `t_end`.
pub fn run<O>(
    mut state: KineticState,
    epsilon: f64,
    g: &GrowthFunction,
    t_end: f64,
    opts: &RunOptions,
    mut observer: O,
) -> Result<KineticState>
where
    O: FnMut(f64, &KineticState),
{
    opts.validate()?;
    check_epsilon(epsilon)?;
    if !(t_end >= state.t) {
        return Err(Error::InvalidParameter {
            name: "t_end",
            reason: format!("must not precede the state time {}, got {t_end}", state.t),
        });
    }
    let dt_max = opts.cfl_fraction * epsilon * state.grid.dx;
    let mut clock = Clock::new(state.t, t_end, dt_max, opts.snapshot_every);
    while let Some((dt, observed)) = clock.next() {
        state = step_with(&state, epsilon, g, dt, opts.step)?;
        state.t = clock.t;
        if observed {
            observer(state.t, &state);
        }
    }
    Ok(state)
}

/// Which source drives the moving-frame perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationSource {
    /// `F'(nu) u`, the linearization around the front.
    Linear,
    /// `F(nu + u) - F(nu)`, the exact perturbation equation.
    Nonlinear,
}

/// Perturbation `(u, v)` of a front in the moving frame `z = x - s t`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSnapshot {
    pub t: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

/// Integrates the perturbation system around the minimal-speed front
///
/// ```text
/// (d_t - s d_z) u + d_z v / eps = S(u)
/// eps (d_t - s d_z) v + d_z u = -v / eps
/// ```
///
/// through `g+- = (u +- v) / 2`, which travel at `-s +- 1/eps`. Inflow
/// boundaries are zero and `dt = cfl_fraction * dx / (s + 1/eps)`. The
/// observer sees `(t, u, v)` at `t = 0`, at each snapshot time and at `t_end`.
#[allow(clippy::too_many_arguments)]
pub fn linearized_run_with<O>(
    profile: &FrontProfile,
    g: &GrowthFunction,
    grid: GridSpec,
    u0: &[f64],
    v0: &[f64],
    t_end: f64,
    source: PerturbationSource,
    opts: &RunOptions,
    mut observer: O,
) -> Result<(Vec<f64>, Vec<f64>)>
where
    O: FnMut(f64, &[f64], &[f64]),
{
    opts.validate()?;
    let params = profile.params;
    if !params.is_minimal_speed() {
        return Err(Error::Regime {
            expected: "minimal-speed front",
            actual: params.regime,
        });
    }
    if u0.len() != grid.n_cells || v0.len() != grid.n_cells {
        return Err(Error::Shape(format!(
            "perturbation has {} / {} cells, grid has {}",
            u0.len(),
            v0.len(),
            grid.n_cells
        )));
    }
    if !(t_end >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "t_end",
            reason: format!("must be nonnegative, got {t_end}"),
        });
    }
    let eps = params.epsilon;
    let s = params.s;
    let fastest = s + 1.0 / eps;
    let dt_max = opts.cfl_fraction * grid.dx / fastest;
    let nu: Vec<f64> = grid.centers().iter().map(|&z| profile.eval(z)).collect();
    let dfnu: Vec<f64> = nu.iter().map(|&v| g.df(v)).collect();

    let mut gp: Vec<f64> = u0.iter().zip(v0).map(|(u, v)| 0.5 * (u + v)).collect();
    let mut gm: Vec<f64> = u0.iter().zip(v0).map(|(u, v)| 0.5 * (u - v)).collect();
    let split = |gp: &[f64], gm: &[f64]| -> (Vec<f64>, Vec<f64>) {
        (
            gp.iter().zip(gm).map(|(p, m)| p + m).collect(),
            gp.iter().zip(gm).map(|(p, m)| p - m).collect(),
        )
    };
    observer(0.0, u0, v0);

    let c_plus = (1.0 / eps - s) / grid.dx;
    let c_minus = -fastest / grid.dx;
    let mut clock = Clock::new(0.0, t_end, dt_max, opts.snapshot_every);
    while let Some((dt, observed)) = clock.next() {
        let mut np = advect(&gp, dt * c_plus, 0.0);
        let mut nm = advect(&gm, dt * c_minus, 0.0);
        for i in 0..np.len() {
            let u = gp[i] + gm[i];
            let v = gp[i] - gm[i];
            let react = match (opts.step.reaction, source) {
                (false, _) => 0.0,
                (true, PerturbationSource::Linear) => dfnu[i] * u,
                (true, PerturbationSource::Nonlinear) => g.f(nu[i] + u) - g.f(nu[i]),
            };
            let relax = if opts.step.relaxation { v / (eps * eps) } else { 0.0 };
            np[i] += 0.5 * dt * (react - relax);
            nm[i] += 0.5 * dt * (react + relax);
        }
        gp = np;
        gm = nm;
        if gp.iter().chain(&gm).any(|x| !x.is_finite()) {
            return Err(Error::Integration(format!(
                "perturbation became non-finite at t = {}",
                clock.t
            )));
        }
        if observed {
            let (u, v) = split(&gp, &gm);
            observer(clock.t, &u, &v);
        }
    }
    Ok(split(&gp, &gm))
}

/// [`linearized_run_with`] collecting every observed snapshot.
#[allow(clippy::too_many_arguments)]
pub fn linearized_run(
    profile: &FrontProfile,
    g: &GrowthFunction,
    grid: GridSpec,
    u0: &[f64],
    v0: &[f64],
    t_end: f64,
    source: PerturbationSource,
    opts: &RunOptions,
) -> Result<Vec<PerturbationSnapshot>> {
    let mut out = Vec::new();
    linearized_run_with(profile, g, grid, u0, v0, t_end, source, opts, |t, u, v| {
        out.push(PerturbationSnapshot {
            t,
            u: u.to_vec(),
            v: v.to_vec(),
        })
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{build_minimal, ProfileOptions};

    fn logistic() -> GrowthFunction {
        GrowthFunction::logistic(1.0).unwrap()
    }

    #[test]
    fn minmod_cases() {
        assert_eq!(minmod(1.0, 2.0), 1.0);
        assert_eq!(minmod(-1.0, 2.0), 0.0);
        assert_eq!(minmod(-3.0, -2.0), -2.0);
        assert_eq!(minmod(0.0, 2.0), 0.0);
    }

    #[test]
    fn grid_spacing() {
        let g = GridSpec::with_dx(-30.0, 120.0, 0.05).unwrap();
        assert_eq!(g.n_cells, 3000);
        assert!((g.dx * g.n_cells as f64 - 150.0).abs() < 1e-12 * 150.0);
        assert!(GridSpec::with_dx(0.0, 1.0, 0.3).is_err());
        assert!(GridSpec::new(1.0, 0.0, 10).is_err());
    }

    #[test]
    fn step_initial_data() {
        let grid = GridSpec::new(-10.0, 10.0, 400).unwrap();
        let s = init_step_state(grid, 0.5).unwrap();
        assert!(s.f_plus[..200].iter().all(|&v| v == 1.0));
        assert!(s.f_plus[200..].iter().all(|&v| v == 0.0));
        assert!(s.f_minus.iter().all(|&v| v == 0.0));
        let mass: f64 = s.density().iter().sum::<f64>() * grid.dx;
        assert!((mass - 10.0).abs() < 1e-12);
        assert_eq!(s.current(), s.f_plus);
        assert!(init_step_state(GridSpec::new(1.0, 2.0, 10).unwrap(), 0.5).is_err());
    }

    #[test]
    fn equilibria_are_fixed_points() {
        let g = logistic();
        let grid = GridSpec::new(-5.0, 5.0, 100).unwrap();
        let dt = 0.9 * 0.5 * grid.dx;
        for value in [0.0, 0.5] {
            let s = KineticState {
                grid,
                t: 0.0,
                f_plus: vec![value; 100],
                f_minus: vec![value; 100],
            };
            let opts = StepOptions {
                inflow_plus: value,
                inflow_minus: value,
                ..StepOptions::default()
            };
            let next = step_with(&s, 0.5, &g, dt, opts).unwrap();
            assert_eq!(next.f_plus, s.f_plus);
            assert_eq!(next.f_minus, s.f_minus);
            assert!(next.current().iter().all(|&j| j == 0.0));
        }
    }

    #[test]
    fn cfl_guard() {
        let g = logistic();
        let grid = GridSpec::new(-5.0, 5.0, 100).unwrap();
        let s = init_step_state(grid, 0.5).unwrap();
        assert!(matches!(step(&s, 0.5, &g, 0.5 * grid.dx), Err(Error::Cfl { .. })));
        assert!(matches!(step(&s, 0.5, &g, -1e-3), Err(Error::Cfl { .. })));
    }

    fn bump(x: f64) -> f64 {
        (-(x * x) / 2.0).exp()
    }

    fn transport_error(n: usize) -> f64 {
        let g = logistic();
        let eps = 0.5;
        let grid = GridSpec::new(-30.0, 30.0, n).unwrap();
        let state = KineticState {
            grid,
            t: 0.0,
            f_plus: grid.centers().iter().map(|&x| bump(x)).collect(),
            f_minus: vec![0.0; n],
        };
        let opts = RunOptions {
            step: StepOptions::transport_only(),
            ..RunOptions::default()
        };
        let end = run(state, eps, &g, 10.0, &opts, |_, _| {}).unwrap();
        let exact: Vec<f64> = grid.centers().iter().map(|&x| bump(x - 20.0)).collect();
        // the inflow f+ = 1/2 has only reached x = -10
        end.f_plus
            .iter()
            .zip(&exact)
            .zip(grid.centers())
            .filter(|(_, x)| *x > -5.0)
            .map(|((a, b), _)| (a - b).abs() * grid.dx)
            .sum()
    }

    #[test]
    fn transport_converges_above_first_order() {
        let e: Vec<f64> = [600, 1200, 2400].iter().map(|&n| transport_error(n)).collect();
        let o1 = (e[0] / e[1]).log2();
        let o2 = (e[1] / e[2]).log2();
        assert!(o1 > 1.5 && o2 > 1.5, "orders {o1} {o2}");
    }

    #[test]
    fn run_lands_on_snapshot_times() {
        let g = logistic();
        let grid = GridSpec::new(-5.0, 5.0, 200).unwrap();
        let s = init_step_state(grid, 0.5).unwrap();
        let opts = RunOptions {
            snapshot_every: Some(0.1),
            ..RunOptions::default()
        };
        let mut times = Vec::new();
        let end = run(s.clone(), 0.5, &g, 1.05, &opts, |t, st| {
            assert_eq!(t, st.t);
            times.push(t)
        })
        .unwrap();
        assert_eq!(times.len(), 11);
        assert!((times[9] - 1.0).abs() < 1e-12);
        assert_eq!(end.t, 1.05);
        let same = run(s.clone(), 0.5, &g, 0.0, &opts, |_, _| panic!("no steps")).unwrap();
        assert_eq!(same, s);
    }

    #[test]
    fn zero_perturbation_stays_zero() {
        let g = logistic();
        let p = build_minimal(0.5, &g, &ProfileOptions::default()).unwrap();
        let grid = GridSpec::new(-20.0, 20.0, 400).unwrap();
        let zero = vec![0.0; 400];
        let opts = RunOptions {
            snapshot_every: Some(1.0),
            ..RunOptions::default()
        };
        let snaps = linearized_run(&p, &g, grid, &zero, &zero, 5.0, PerturbationSource::Linear, &opts).unwrap();
        assert_eq!(snaps.len(), 6);
        assert!(snaps.iter().all(|s| s.u.iter().chain(&s.v).all(|&x| x == 0.0)));
    }

    #[test]
    fn characteristic_speed_of_g_plus() {
        let g = logistic();
        let p = build_minimal(0.5, &g, &ProfileOptions::default()).unwrap();
        let grid = GridSpec::new(-20.0, 20.0, 1600).unwrap();
        let centers = grid.centers();
        let bump0: Vec<f64> = centers.iter().map(|&z| bump(z + 5.0)).collect();
        let opts = RunOptions {
            step: StepOptions::transport_only(),
            ..RunOptions::default()
        };
        let (u, v) =
            linearized_run_with(&p, &g, grid, &bump0, &bump0, 5.0, PerturbationSource::Linear, &opts, |_, _, _| {})
                .unwrap();
        // g+ = u (v = u), g- = 0; speed -s + 1/eps = 0.4
        let peak = |f: &[f64]| centers[f.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0];
        assert!((peak(&u) - (-5.0 + 0.4 * 5.0)).abs() <= grid.dx);
        assert!(u.iter().zip(&v).all(|(a, b)| (a - b).abs() < 1e-12));
    }

    #[test]
    fn perturbation_needs_minimal_front() {
        let g = logistic();
        let params = crate::dispersion::WaveParameters::new(0.5, 1.8, &g).unwrap();
        let p = crate::profile::build_parabolic(&params, &g, &ProfileOptions::default()).unwrap();
        let grid = GridSpec::new(-5.0, 5.0, 50).unwrap();
        let zero = vec![0.0; 50];
        let r = linearized_run(&p, &g, grid, &zero, &zero, 1.0, PerturbationSource::Linear, &RunOptions::default());
        assert!(matches!(r, Err(Error::Regime { .. })));
    }

    #[test]
    fn front_state_is_nearly_stationary_in_shape() {
        let g = logistic();
        let p = build_minimal(0.5, &g, &ProfileOptions::default()).unwrap();
        let grid = GridSpec::with_dx(-30.0, 30.0, 0.05).unwrap();
        let s = init_front_state(grid, &p, &g, 0.0);
        let rho = s.density();
        let end = run(s, 0.5, &g, 5.0, &RunOptions::default(), |_, _| {}).unwrap();
        let moved = end.density();
        let x = grid.centers();
        let err = x
            .iter()
            .zip(&moved)
            .filter(|(x, _)| x.abs() < 15.0)
            .map(|(&x, &r)| (r - p.eval(x - 1.6 * 5.0)).abs())
            .fold(0.0, f64::max);
        assert!(err < 0.02, "front drifted by {err}");
        assert!(rho.iter().all(|&r| (0.0..=1.0 + 1e-12).contains(&r)));
    }
}
