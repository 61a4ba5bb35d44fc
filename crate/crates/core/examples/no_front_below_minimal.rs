//! Speeds below the minimal speed admit no monotone front: the decay roots at
//! the leading edge are complex and the constructor refuses.
//!
//! ```text
//! cargo run --example no_front_below_minimal
//! ```

use hyperkpp::profile::{build_parabolic, ProfileOptions};
use hyperkpp::{Error, GrowthFunction, WaveParameters};

fn main() -> hyperkpp::Result<()> {
    let g = GrowthFunction::logistic(1.0)?;
    let eps = 0.5;
    let s_star = WaveParameters::minimal(eps, &g)?.s_star;
    for factor in [0.5, 0.9, 0.999, 1.0] {
        let params = WaveParameters::new(eps, factor * s_star, &g)?;
        match build_parabolic(&params, &g, &ProfileOptions::default()) {
            Ok(front) => println!("s = {:.5}: front with {} samples", params.s, front.z.len()),
            Err(Error::NoMonotoneFront { discriminant, .. }) => {
                println!("s = {:.5}: no monotone front, discriminant {discriminant:.3e}", params.s)
            }
            Err(e) => return Err(e),
        }
    }
    Ok(())
}
