//! Smooth subsonic fronts in the parabolic regime at and above the minimal
//! speed: profile residual, tail decay and the bound `nu' + lambda nu >= 0`.
//!
//! ```text
//! cargo run --release --example parabolic_front -- 0.5
//! ```

use hyperkpp::profile::{build_parabolic, residual, ProfileOptions};
use hyperkpp::{GrowthFunction, WaveParameters};

fn main() -> hyperkpp::Result<()> {
    let eps: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.5);
    let g = GrowthFunction::logistic(1.0)?;
    let s_star = WaveParameters::minimal(eps, &g)?.s_star;
    for factor in [1.0, 1.05, 1.15] {
        let params = WaveParameters::new(eps, factor * s_star, &g)?;
        let front = build_parabolic(&params, &g, &ProfileOptions::default())?;
        let lambda = params.lambda.unwrap_or(f64::NAN);
        let bound = front
            .z
            .iter()
            .map(|&z| {
                let (nu, dnu) = front.eval_with_slope(z);
                dnu + lambda * nu
            })
            .fold(f64::INFINITY, f64::min);
        println!(
            "s = {:.5}: z in [{:.1}, {:.1}], residual {:.2e}, lambda {lambda:.4}, min(nu' + lambda nu) {bound:.1e}",
            params.s,
            front.z[0],
            front.z[front.z.len() - 1],
            residual(&front, &g)?.max_abs,
        );
        for z in [-4.0, -2.0, 0.0, 2.0, 4.0, 8.0] {
            print!("  nu({z}) = {:.6}", front.eval(z));
        }
        println!();
    }
    Ok(())
}
