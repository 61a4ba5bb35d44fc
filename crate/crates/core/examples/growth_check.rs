//! Checks the monostable assumptions for the logistic term and for a
//! user-supplied analytic growth function.
//!
//! ```text
//! cargo run --example growth_check
//! ```

use hyperkpp::{Derivative, GrowthFunction};

fn report(name: &str, g: &GrowthFunction) -> hyperkpp::Result<()> {
    let r = g.validate(1001)?;
    println!("{name}: F'(0) = {}, F'(1) = {}, inf(-F'') = {}", r.fprime0, r.fprime1, r.alpha);
    for c in &r.checks {
        println!("  {:<14} {}  {}", c.name, if c.passed { "ok  " } else { "FAIL" }, c.detail);
    }
    Ok(())
}

fn main() -> hyperkpp::Result<()> {
    let logistic = GrowthFunction::logistic(1.0)?;
    report("logistic(1)", &logistic)?;
    println!("  F''(0.3) = {}", logistic.evaluate(0.3, Derivative::Second)?);

    // u (1 - u^2) is monostable, but F''(0) = 0 so it fails the uniform
    // concavity check.
    let cubic = GrowthFunction::analytic(|u| u * (1.0 - u * u), |u| 1.0 - 3.0 * u * u, |u| -6.0 * u);
    report("u (1 - u^2)", &cubic)?;

    let bad = GrowthFunction::logistic(-1.0);
    println!("logistic(-1): {}", bad.map(|_| "accepted".to_string()).unwrap_or_else(|e| e.to_string()));
    Ok(())
}
