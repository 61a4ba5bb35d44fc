//! Minimal fronts at and beyond the transition: the continuous critical front
//! `(1 - e^{z/2})_+` at `eps = 1` and discontinuous fronts that jump from
//! `theta = 1 - 1/eps^2` to 0 at `z = 0` for `eps > 1`.
//!
//! ```text
//! cargo run --release --example hyperbolic_front
//! ```

use hyperkpp::profile::{build_hyperbolic, ProfileOptions};
use hyperkpp::{GrowthFunction, WaveParameters};

fn main() -> hyperkpp::Result<()> {
    let g = GrowthFunction::logistic(1.0)?;
    let critical = build_hyperbolic(&WaveParameters::minimal(1.0, &g)?, &g, &ProfileOptions::default())?;
    let gap = (-200..=0)
        .map(|k| {
            let z = 0.1 * k as f64;
            (critical.eval(z) - (1.0 - (z / 2.0).exp()).max(0.0)).abs()
        })
        .fold(0.0, f64::max);
    println!("eps = 1: {:?}, max |nu - (1 - e^(z/2))+| = {gap:.2e}", critical.kind);

    for eps in [1.5, 2.0, 3.0] {
        let params = WaveParameters::minimal(eps, &g)?;
        let front = build_hyperbolic(&params, &g, &ProfileOptions::default())?;
        println!(
            "eps = {eps}: {:?}, theta = {:.6}, nu(0-) = {:.6}, nu(0+) = {}, nu(-5) = {:.6}",
            front.kind,
            params.theta.unwrap_or(f64::NAN),
            front.eval(-1e-9),
            front.eval(1e-9),
            front.eval(-5.0)
        );
    }
    Ok(())
}
