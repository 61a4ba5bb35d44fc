//! Weighted Lyapunov functional `1/2 int (u^2 + v^2) e^{2 phi}` along the
//! linearized flow around the minimal front, in the parabolic and hyperbolic
//! regimes.
//!
//! ```text
//! cargo run --release --example lyapunov_stability
//! ```

use hyperkpp::cli::experiments::{run_stability, StabilitySetup};
use hyperkpp::solver::GridSpec;
use hyperkpp::GrowthFunction;

fn main() -> hyperkpp::Result<()> {
    let g = GrowthFunction::logistic(1.0)?;
    let runs = [
        ("eps = 0.5", StabilitySetup::new(0.5, GridSpec::with_dx(-40.0, 40.0, 0.0125)?, 20.0)),
        (
            "eps = 2",
            StabilitySetup {
                // inside the support of the discontinuous front
                center: Some(-20.0),
                ..StabilitySetup::new(2.0, GridSpec::with_dx(-60.0, 0.0, 0.05)?, 20.0)
            },
        ),
    ];
    for (name, setup) in runs {
        let out = run_stability(&setup, &g)?;
        println!("{name}: worst growth per unit time {:.3e}", out.worst_growth(|r| r.lyapunov));
        for r in out.records.iter().step_by(8) {
            println!("  t = {:>5.1}  L = {:.6e}  sup|u| = {:.5}", r.t, r.lyapunov, r.sup_norm);
        }
    }
    Ok(())
}
