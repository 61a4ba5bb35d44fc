//! The combined energy `E = E1w + d' E2w + d'' (E1u + d E2u)` along the
//! nonlinear perturbation of the parabolic minimal front, with the weight
//! constants it is built from.
//!
//! ```text
//! cargo run --release --example energy_suite
//! ```

use hyperkpp::cli::experiments::{run_stability, StabilitySetup};
use hyperkpp::solver::{GridSpec, PerturbationSource};
use hyperkpp::GrowthFunction;

fn main() -> hyperkpp::Result<()> {
    let g = GrowthFunction::logistic(1.0)?;
    let setup = StabilitySetup {
        source: PerturbationSource::Nonlinear,
        ..StabilitySetup::new(0.5, GridSpec::with_dx(-40.0, 40.0, 0.0125)?, 40.0)
    };
    let out = run_stability(&setup, &g)?;
    if let Some(e) = out.records[0].energy {
        let (d, d1, d2) = e.deltas;
        println!("z0 = {:.3}, delta = {d:.4e}, delta' = {d1:.4e}, delta'' = {d2:.4e}", e.z0);
    }
    println!("{:>5} {:>12} {:>12} {:>12} {:>12} {:>12}", "t", "E1u", "E2u", "E1w", "E2w", "E");
    for r in out.records.iter().step_by(10) {
        if let Some(e) = r.energy {
            println!(
                "{:>5.1} {:>12.5e} {:>12.5e} {:>12.5e} {:>12.5e} {:>12.5e}",
                r.t, e.e1u, e.e2u, e.e1w, e.e2w, e.e_combined
            );
        }
    }
    let growth = out.worst_growth(|r| r.energy.map_or(f64::NAN, |e| e.e_combined));
    println!("worst growth of E per unit time {growth:.3e}");
    Ok(())
}
