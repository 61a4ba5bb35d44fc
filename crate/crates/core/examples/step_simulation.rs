//! Step initial data in the lab frame for one epsilon: measured speed,
//! and the regime-specific diagnostics (profile misfit at `eps = 1`, jump
//! sharpness for `eps > 1`).
//!
//! ```text
//! cargo run --release --example step_simulation -- 2 120
//! ```

use hyperkpp::cli::experiments::{simulate, SimulationSetup};
use hyperkpp::GrowthFunction;

fn main() -> hyperkpp::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>().expect("numeric argument"));
    let eps = args.next().unwrap_or(0.5);
    let t_end = args.next().unwrap_or(60.0);
    let g = GrowthFunction::logistic(1.0)?;
    let mut last_print = 0.0;
    let out = simulate(&SimulationSetup::reference(eps, t_end), &g, |t, state| {
        if t - last_print >= 10.0 - 1e-9 {
            last_print = t;
            let rho = state.density();
            let mass: f64 = rho.iter().sum::<f64>() * state.grid.dx;
            println!("t = {t:>5.1}  mass {mass:>9.3}");
        }
    })?;
    println!("regime {:?}, s* = {}", out.regime, out.s_star);
    println!(
        "measured speed {:.5} over t in [{}, {}], R^2 = {:.6}",
        out.speed.speed, out.speed.window.0, out.speed.window.1, out.speed.r_squared
    );
    println!("density range [{:.4}, {:.4}]", out.rho_range.0, out.rho_range.1);
    if let Some(c) = out.profile_error {
        println!("critical profile: shift {:.3}, L-inf {:.4}, L2 {:.4}", c.shift, c.linf_error, c.l2_error);
    }
    if let Some(sh) = out.sharpness {
        println!(
            "jump: {} cells wide, back value {:.4} (theta {:.4})",
            sh.width_cells,
            sh.back_value,
            out.theta.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
