//! Supersonic front `s > 1/eps` and its phase-plane orbit `P(v)`, which stays
//! trapped between 0 and `min(lambda v, k F(v))`.
//!
//! ```text
//! cargo run --release --example supersonic_orbit
//! ```

use hyperkpp::profile::{build_supersonic, residual, ProfileOptions};
use hyperkpp::{GrowthFunction, WaveParameters};

fn main() -> hyperkpp::Result<()> {
    let g = GrowthFunction::logistic(1.0)?;
    let params = WaveParameters::new(2f64.sqrt(), 1.0, &g)?;
    let (front, orbit) = build_supersonic(&params, &g, &ProfileOptions::default())?;
    println!(
        "eps = sqrt 2, s = 1: lambda = {:.6}, k = {:.6}, {} orbit nodes",
        orbit.lambda_unstable,
        orbit.k,
        orbit.v.len()
    );
    println!("trapping violation {:.2e}", orbit.max_trapping_violation(&g));
    println!("P at the last node (v = {:.7}): {:.2e}", orbit.v[orbit.v.len() - 1], orbit.p[orbit.p.len() - 1]);
    println!("profile residual {:.2e}", residual(&front, &g)?.max_abs);
    for k in (0..orbit.v.len()).step_by(orbit.v.len() / 8) {
        let (v, p) = (orbit.v[k], orbit.p[k]);
        println!(
            "  v {v:.4}  P {p:.5}  lambda v {:.5}  k F {:.5}",
            orbit.lambda_unstable * v,
            orbit.k * g.f(v)
        );
    }
    Ok(())
}
