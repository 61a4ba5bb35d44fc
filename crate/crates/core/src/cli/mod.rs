//! Command-line front end of the `hyperkpp` binary.
//!
//! ```text
//! hyperkpp simulate   --epsilon 0.5 --t-end 60 --out out/fig1a
//! hyperkpp profile    --epsilon 1 --speed 1.5
//! hyperkpp dispersion --epsilon 0.25,0.5,1,2
//! hyperkpp speedscan  --epsilon 0.5,1,2 --jobs 3
//! hyperkpp stability  --epsilon 0.5 --nonlinear
//! ```
//!
//! Settings come from built-in defaults, then `--preset`, then the
//! `--config` file, then the remaining flags. Exit status is 0 on success,
//! 1 for invalid input and 2 when a computation fails.

pub mod commands;
pub mod config;
pub mod experiments;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use config::{Command, ExperimentConfig, Settings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hyperkpp", version, about = "Fronts of the hyperbolic Fisher-KPP equation")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Step initial data in the lab frame: snapshots and measured speed.
    Simulate(Flags),
    /// Front profile at a given speed (minimal speed by default).
    Profile(Flags),
    /// Regime, minimal speed and characteristic rates for each epsilon.
    Dispersion(Flags),
    /// Measured against predicted minimal speed over a list of epsilon.
    Speedscan(Flags),
    /// Weighted energies of a perturbed minimal front.
    Stability(Flags),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct Flags {
    /// `key = value` file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// fig1a, fig1b or fig1c.
    #[arg(long)]
    preset: Option<String>,
    /// Relaxation parameter; comma-separated list for dispersion and speedscan.
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    speed: Option<String>,
    /// Growth family (logistic).
    #[arg(long)]
    growth: Option<String>,
    /// Logistic rate r in F(u) = r u (1 - u).
    #[arg(long)]
    rate: Option<String>,
    /// Left end of the domain.
    #[arg(long)]
    a: Option<String>,
    /// Right end of the domain.
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    dx: Option<String>,
    #[arg(long = "t-end", alias = "t_end")]
    t_end: Option<String>,
    /// Time step as a fraction of the CFL limit.
    #[arg(long)]
    cfl: Option<String>,
    #[arg(long = "snapshot-every", alias = "snapshot_every")]
    snapshot_every: Option<String>,
    /// Level set tracked for the front position.
    #[arg(long)]
    level: Option<String>,
    /// Fraction of the run discarded before the speed fit.
    #[arg(long)]
    discard: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
    /// Worker threads for speedscan.
    #[arg(long)]
    jobs: Option<String>,
    /// Perturbation amplitude (stability).
    #[arg(long)]
    amplitude: Option<String>,
    /// Perturbation width (stability).
    #[arg(long)]
    width: Option<String>,
    /// Perturbation centre (stability); defaults to the half-level point.
    #[arg(long)]
    center: Option<String>,
    #[arg(long = "report-every", alias = "report_every")]
    report_every: Option<String>,
    /// Full nonlinear source in the moving-frame perturbation.
    #[arg(long)]
    nonlinear: bool,
    /// Simulate the perturbed front in the lab frame.
    #[arg(long = "lab-frame", alias = "lab_frame")]
    lab_frame: bool,
}

impl Flags {
    fn settings(&self) -> Result<Settings> {
        let mut s = Settings::default();
        let pairs = [
            ("preset", &self.preset),
            ("epsilon", &self.epsilon),
            ("speed", &self.speed),
            ("growth", &self.growth),
            ("rate", &self.rate),
            ("a", &self.a),
            ("b", &self.b),
            ("dx", &self.dx),
            ("t_end", &self.t_end),
            ("cfl", &self.cfl),
            ("snapshot_every", &self.snapshot_every),
            ("level", &self.level),
            ("discard", &self.discard),
            ("out", &self.out),
            ("jobs", &self.jobs),
            ("amplitude", &self.amplitude),
            ("width", &self.width),
            ("center", &self.center),
            ("report_every", &self.report_every),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                s.set(key, v)?;
            }
        }
        if self.nonlinear {
            s.nonlinear = Some(true);
        }
        if self.lab_frame {
            s.lab_frame = Some(true);
        }
        Ok(s)
    }
}

/// Outcome of argument parsing.
#[derive(Debug)]
pub enum Parsed {
    Run(Box<ExperimentConfig>),
    /// `--help` or `--version`: text to print, then exit successfully.
    Info(String),
}

/// Resolves command-line arguments (program name first) into a configuration.
pub fn parse_config<I, T>(args: I) -> Result<Parsed>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(Parsed::Info(e.to_string())),
                _ => Err(Error::ConfigValue {
                    field: "arguments".into(),
                    message: e.to_string(),
                }),
            };
        }
    };
    let (command, flags) = match &cli.command {
        Sub::Simulate(f) => (Command::Simulate, f),
        Sub::Profile(f) => (Command::Profile, f),
        Sub::Dispersion(f) => (Command::Dispersion, f),
        Sub::Speedscan(f) => (Command::Speedscan, f),
        Sub::Stability(f) => (Command::Stability, f),
    };
    let file = match &flags.config {
        None => Settings::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::ConfigValue {
                field: "config".into(),
                message: format!("cannot read {}: {e}", path.display()),
            })?;
            Settings::from_file_str(&text)?
        }
    };
    let mut settings = file.overlay(flags.settings()?);
    settings.command = Some(command);
    Ok(Parsed::Run(Box::new(settings.resolve()?)))
}

/// Exit status for an error: 1 for invalid input, 2 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_validation() {
        EXIT_VALIDATION
    } else {
        EXIT_NUMERICAL
    }
}

/// Parses `args`, runs the command, and returns the process exit status.
pub fn main_with_args<I, T>(args: I, log: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let outcome = parse_config(args).and_then(|parsed| match parsed {
        Parsed::Info(text) => {
            let _ = write!(log, "{text}");
            Ok(())
        }
        Parsed::Run(config) => commands::execute(&config, log).map(|written| {
            for f in written.files {
                let _ = writeln!(log, "wrote {}", f.display());
            }
        }),
    });
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
