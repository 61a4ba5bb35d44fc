//! Regime, minimal speed and characteristic rates across epsilon.
//!
//! The minimal speed rises along `2 / (1 + eps^2)` up to the transition at
//! `eps = 1` and falls along `1 / eps` after it.
//!
//! ```text
//! cargo run --example dispersion_table
//! ```

use hyperkpp::dispersion::{char_roots_zero, minimal_speed, WaveParameters};
use hyperkpp::GrowthFunction;

fn main() -> hyperkpp::Result<()> {
    let g = GrowthFunction::logistic(1.0)?;
    println!("{:>6} {:>11} {:>9} {:>9} {:>9} {:>9}", "eps", "regime", "s*", "lambda", "lambda'", "theta");
    for k in 1..=12 {
        let eps = 0.25 * k as f64;
        let p = WaveParameters::minimal(eps, &g)?;
        let show = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.5}"));
        println!(
            "{eps:>6.2} {:>11} {:>9.5} {:>9} {:>9.5} {:>9}",
            format!("{:?}", p.regime),
            p.s_star,
            show(p.lambda),
            p.lambda_prime,
            show(p.theta)
        );
    }

    // Below the minimal speed the decay roots at the leading edge turn complex.
    let eps = 0.5;
    let s = 0.8 * minimal_speed(eps, &g);
    let roots = char_roots_zero(&WaveParameters::new(eps, s, &g)?, &g)?;
    println!("\neps = {eps}, s = {s}: roots at nu = 0 are {} and {}", roots[0], roots[1]);
    Ok(())
}
