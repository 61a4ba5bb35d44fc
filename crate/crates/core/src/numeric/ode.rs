//! Adaptive Dormand-Prince 5(4) integrator with terminal event location.
//!
//! Integration runs in either direction (`t_end < t0` is allowed). An optional
//! event function stops the integration at its first sign change; the crossing
//! is located by bisecting the length of a single step taken from the last
//! accepted node.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub atol: f64,
    pub rtol: f64,
    /// Initial step magnitude.
    pub h_init: f64,
    /// Largest step magnitude; keeps the node set dense enough to resample.
    pub h_max: f64,
    pub max_steps: usize,
    /// Bracket width at which event bisection stops.
    pub event_tol: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            atol: 1e-10,
            rtol: 1e-10,
            h_init: 1e-4,
            h_max: 0.05,
            max_steps: 2_000_000,
            event_tol: 1e-12,
        }
    }
}

/// Accepted nodes of an integration.
#[derive(Debug, Clone)]
pub struct Trajectory<const N: usize> {
    pub t: Vec<f64>,
    pub y: Vec<[f64; N]>,
}

impl<const N: usize> Trajectory<N> {
    pub fn last(&self) -> (f64, [f64; N]) {
        let i = self.t.len() - 1;
        (self.t[i], self.y[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    /// Reached `t_end`.
    End,
    /// The event function changed sign; the last node sits on the crossing.
    Event,
}

// Dormand-Prince tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th and embedded 4th order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// One Dormand-Prince step; returns the 5th order solution and error estimate.
fn dp_step<const N: usize, F>(rhs: &F, t: f64, y: &[f64; N], h: f64) -> ([f64; N], [f64; N])
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let k1 = rhs(t, y);
    let k2 = rhs(t + C2 * h, &axpy(y, h, &[(A21, &k1)]));
    let k3 = rhs(t + C3 * h, &axpy(y, h, &[(A31, &k1), (A32, &k2)]));
    let k4 = rhs(t + C4 * h, &axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
    let k5 = rhs(
        t + C5 * h,
        &axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    );
    let k6 = rhs(
        t + h,
        &axpy(y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
    );
    let y5 = axpy(y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
    let k7 = rhs(t + h, &y5);
    let mut err = [0.0; N];
    for i in 0..N {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    (y5, err)
}

/// Integrates `y' = rhs(t, y)` from `t0` to `t_end`, or until `event` changes sign.
pub fn integrate<const N: usize, F, G>(
    rhs: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &OdeOptions,
    event: Option<G>,
) -> Result<(Trajectory<N>, Termination)>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    G: Fn(f64, &[f64; N]) -> f64,
{
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let mut traj = Trajectory {
        t: vec![t0],
        y: vec![y0],
    };
    if t_end == t0 {
        return Ok((traj, Termination::End));
    }
    let mut t = t0;
    let mut y = y0;
    let mut h = opts.h_init.min(opts.h_max).min((t_end - t0).abs());
    let mut g_prev = event.as_ref().map(|g| g(t, &y));

    for _ in 0..opts.max_steps {
        let remaining = (t_end - t).abs();
        if remaining <= 1e-15 * t_end.abs().max(1.0) {
            return Ok((traj, Termination::End));
        }
        let step = h.min(remaining);
        let (y_new, err) = dp_step(&rhs, t, &y, dir * step);
        if y_new.iter().any(|v| !v.is_finite()) {
            h = 0.25 * step;
            if h < 1e-14 {
                return Err(Error::Integration(format!("non-finite state near t = {t}")));
            }
            continue;
        }
        let mut norm = 0.0;
        for i in 0..N {
            let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            norm += (err[i] / sc).powi(2);
        }
        let norm = (norm / N as f64).sqrt();
        if norm > 1.0 {
            h = step * (0.9 * norm.powf(-0.2)).max(0.2);
            if h < 1e-14 {
                return Err(Error::Integration(format!("step size underflow at t = {t}")));
            }
            continue;
        }

        let t_new = if step == remaining { t_end } else { t + dir * step };

        if let (Some(g), Some(gp)) = (event.as_ref(), g_prev) {
            let g_new = g(t_new, &y_new);
            if gp != 0.0 && (g_new == 0.0 || g_new.signum() != gp.signum()) {
                let (te, ye) = locate_event(&rhs, g, t, &y, step, dir, gp, opts.event_tol)?;
                traj.t.push(te);
                traj.y.push(ye);
                return Ok((traj, Termination::Event));
            }
            g_prev = Some(g_new);
        }

        t = t_new;
        y = y_new;
        traj.t.push(t);
        traj.y.push(y);

        let grow = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
        h = (step * grow).min(opts.h_max);
    }
    Err(Error::Integration(format!(
        "exceeded {} steps before reaching t = {t_end}",
        opts.max_steps
    )))
}

#[allow(clippy::too_many_arguments)]
fn locate_event<const N: usize, F, G>(
    rhs: &F,
    g: &G,
    t: f64,
    y: &[f64; N],
    step: f64,
    dir: f64,
    g_start: f64,
    tol: f64,
) -> Result<(f64, [f64; N])>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    G: Fn(f64, &[f64; N]) -> f64,
{
    let mut lo = 0.0;
    let mut hi = step;
    let mut y_hi = dp_step(rhs, t, y, dir * hi).0;
    for _ in 0..200 {
        if hi - lo <= tol {
            return Ok((t + dir * hi, y_hi));
        }
        let mid = 0.5 * (lo + hi);
        let y_mid = dp_step(rhs, t, y, dir * mid).0;
        let g_mid = g(t + dir * mid, &y_mid);
        if !g_mid.is_finite() {
            return Err(Error::Event(format!("event function not finite near t = {}", t + dir * mid)));
        }
        if g_mid != 0.0 && g_mid.signum() == g_start.signum() {
            lo = mid;
        } else {
            hi = mid;
            y_hi = y_mid;
        }
    }
    Err(Error::Event(format!("bisection did not converge near t = {t}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    type NoEvent = fn(f64, &[f64; 1]) -> f64;

    #[test]
    fn exponential_decay() {
        let opts = OdeOptions::default();
        let (traj, term) =
            integrate(|_, y: &[f64; 1]| [-y[0]], 0.0, [1.0], 5.0, &opts, None::<NoEvent>).unwrap();
        assert_eq!(term, Termination::End);
        let (t, y) = traj.last();
        assert_eq!(t, 5.0);
        assert!((y[0] - (-5f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn backward_direction() {
        let opts = OdeOptions::default();
        let (traj, _) =
            integrate(|_, y: &[f64; 1]| [y[0]], 0.0, [1.0], -2.0, &opts, None::<NoEvent>).unwrap();
        let (t, y) = traj.last();
        assert_eq!(t, -2.0);
        assert!((y[0] - (-2f64).exp()).abs() < 1e-9 * (-2f64).exp());
        assert!(traj.t.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn harmonic_oscillator_event() {
        // y = (cos t, -sin t); first zero of cos at pi/2
        let opts = OdeOptions::default();
        let (traj, term) = integrate(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [1.0, 0.0],
            10.0,
            &opts,
            Some(|_: f64, y: &[f64; 2]| y[0]),
        )
        .unwrap();
        assert_eq!(term, Termination::Event);
        let (t, y) = traj.last();
        assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
        assert!(y[0].abs() < 1e-10);
    }
}
