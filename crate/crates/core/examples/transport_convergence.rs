//! Pure transport of a smooth bump with the flux-limited scheme: L1 error
//! and observed order under grid refinement.
//!
//! ```text
//! cargo run --release --example transport_convergence
//! ```

use hyperkpp::solver::{run, GridSpec, KineticState, RunOptions, StepOptions};
use hyperkpp::GrowthFunction;

fn bump(x: f64) -> f64 {
    (-x * x / 4.0).exp()
}

fn main() -> hyperkpp::Result<()> {
    let g = GrowthFunction::logistic(1.0)?;
    let eps = 0.5;
    let opts = RunOptions {
        step: StepOptions::transport_only(),
        ..RunOptions::default()
    };
    let mut previous: Option<f64> = None;
    for n in [300, 600, 1200, 2400, 4800] {
        let grid = GridSpec::new(-30.0, 30.0, n)?;
        let state = KineticState {
            grid,
            t: 0.0,
            f_plus: grid.centers().iter().map(|&x| bump(x)).collect(),
            f_minus: vec![0.0; n],
        };
        // f+ moves at 1/eps = 2, so the bump travels 20 by t = 10.
        let end = run(state, eps, &g, 10.0, &opts, |_, _| {})?;
        let error: f64 = end
            .f_plus
            .iter()
            .zip(grid.centers())
            .filter(|(_, x)| *x > -5.0)
            .map(|(f, x)| (f - bump(x - 20.0)).abs() * grid.dx)
            .sum();
        match previous {
            Some(p) => println!("dx = {:.5}: L1 error {error:.3e}, order {:.2}", grid.dx, (p / error).log2()),
            None => println!("dx = {:.5}: L1 error {error:.3e}", grid.dx),
        }
        previous = Some(error);
    }
    Ok(())
}
