//! Weak front at the sonic speed `s = 1/eps` in the parabolic regime. It
//! solves a first-order equation and reaches 0 at a finite point.
//!
//! ```text
//! cargo run --release --example sonic_front
//! ```

use hyperkpp::profile::{build_weak_sonic, ProfileOptions};
use hyperkpp::{GrowthFunction, WaveParameters};

fn main() -> hyperkpp::Result<()> {
    let g = GrowthFunction::logistic(1.0)?;
    for eps in [0.3, 0.5, 0.8] {
        let params = WaveParameters::new(eps, 1.0 / eps, &g)?;
        let front = build_weak_sonic(&params, &g, &ProfileOptions::default())?;
        let quarter = front.level_crossing(0.25).unwrap_or(f64::NAN);
        let tenth = front.level_crossing(0.1).unwrap_or(f64::NAN);
        println!(
            "eps = {eps}: kind {:?}, nu(0) = {:.6}, nu = 1/4 at z = {quarter:.4}, nu = 1/10 at z = {tenth:.4}",
            front.kind,
            front.eval(0.0)
        );
    }
    Ok(())
}
