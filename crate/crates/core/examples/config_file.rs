//! Experiment configuration: a `key = value` file overlaid by command-line
//! style overrides, then written back in the same format.
//!
//! ```text
//! cargo run --example config_file
//! ```

use hyperkpp::cli::config::{Command, Settings};
use hyperkpp::cli::parse_config;
use hyperkpp::cli::Parsed;

fn main() -> hyperkpp::Result<()> {
    let file = "# third panel, shorter run\npreset = fig1c\nt_end = 80\ndx = 0.025\n";
    let mut flags = Settings {
        command: Some(Command::Simulate),
        ..Settings::default()
    };
    flags.set("t-end", "100")?;
    let config = Settings::from_file_str(file)?.overlay(flags).resolve()?;
    print!("{}", config.to_file_string());

    match Settings::from_file_str("epsilon = 1\nspeeed = 2\n") {
        Err(e) => println!("\nrejected: {e}"),
        Ok(_) => println!("\nunexpectedly accepted"),
    }
    if let Parsed::Run(c) = parse_config(["hyperkpp", "speedscan", "--epsilon", "0.5,1,2", "--jobs", "2"])? {
        println!("speedscan over {:?} on {:?} threads", c.epsilon, c.jobs);
    }
    Ok(())
}
