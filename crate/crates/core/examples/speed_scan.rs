//! Measured against predicted minimal speed over a range of epsilon, one
//! simulation per worker thread.
//!
//! ```text
//! cargo run --release --example speed_scan
//! ```

use rayon::prelude::*;

use hyperkpp::cli::experiments::{simulate, SimulationSetup};
use hyperkpp::dispersion::minimal_speed;
use hyperkpp::GrowthFunction;

fn main() -> hyperkpp::Result<()> {
    let g = GrowthFunction::logistic(1.0)?;
    let eps: Vec<f64> = (1..=10).map(|k| 0.25 * k as f64).collect();
    let rows: Vec<(f64, f64, hyperkpp::Result<f64>)> = eps
        .par_iter()
        .map(|&e| {
            // Slow fronts get more time so they cover a comparable distance.
            let t_end = if e > 1.0 { 120.0 } else { 60.0 };
            let measured = simulate(&SimulationSetup::reference(e, t_end), &g, |_, _| {}).map(|o| o.speed.speed);
            (e, minimal_speed(e, &g), measured)
        })
        .collect();
    println!("{:>6} {:>9} {:>9} {:>9}", "eps", "s*", "measured", "rel err");
    for (e, s_star, measured) in rows {
        match measured {
            Ok(s) => println!("{e:>6.2} {s_star:>9.5} {s:>9.5} {:>9.2e}", (s - s_star).abs() / s_star),
            Err(err) => println!("{e:>6.2} {s_star:>9.5} failed: {err}"),
        }
    }
    Ok(())
}
