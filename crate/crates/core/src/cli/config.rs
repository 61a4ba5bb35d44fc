//! Experiment configuration: `key = value` files, command-line overrides and
//! per-command defaults.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::dispersion::{classify, Regime};
use crate::error::{Error, Result};
use super::output::fmt_float;
use crate::growth::GrowthFunction;
use crate::solver::{GridSpec, PerturbationSource};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Profile,
    Dispersion,
    Speedscan,
    Stability,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Profile => "profile",
            Command::Dispersion => "dispersion",
            Command::Speedscan => "speedscan",
            Command::Stability => "stability",
        }
    }

    fn takes_epsilon_list(self) -> bool {
        matches!(self, Command::Dispersion | Command::Speedscan)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthSpec {
    Logistic { rate: f64 },
}

impl GrowthSpec {
    pub fn build(&self) -> Result<GrowthFunction> {
        match *self {
            GrowthSpec::Logistic { rate } => GrowthFunction::logistic(rate),
        }
    }
}

/// Fully resolved experiment parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub preset: Option<String>,
    /// One value, or several for `dispersion` and `speedscan`.
    pub epsilon: Vec<f64>,
    pub speed: Option<f64>,
    pub growth: GrowthSpec,
    pub grid: GridSpec,
    pub t_end: f64,
    pub cfl_fraction: f64,
    pub snapshot_every: f64,
    pub level: f64,
    pub discard_fraction: f64,
    pub output_path: PathBuf,
    /// Worker threads for `speedscan`; `None` uses every hardware thread.
    pub jobs: Option<usize>,
    pub amplitude: f64,
    pub width: f64,
    pub center: Option<f64>,
    pub report_every: f64,
    pub nonlinear: bool,
    pub lab_frame: bool,
}

impl ExperimentConfig {
    pub fn first_epsilon(&self) -> f64 {
        self.epsilon[0]
    }

    pub fn source(&self) -> PerturbationSource {
        if self.nonlinear {
            PerturbationSource::Nonlinear
        } else {
            PerturbationSource::Linear
        }
    }

    /// `key = value` lines that parse back to this configuration.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        line("command", self.command.name().to_string());
        if let Some(p) = &self.preset {
            line("preset", p.clone());
        }
        line("epsilon", join(&self.epsilon));
        if let Some(s) = self.speed {
            line("speed", fmt_float(s));
        }
        match self.growth {
            GrowthSpec::Logistic { rate } => {
                line("growth", "logistic".into());
                line("rate", fmt_float(rate));
            }
        }
        line("a", fmt_float(self.grid.a));
        line("b", fmt_float(self.grid.b));
        line("dx", fmt_float(self.grid.dx));
        line("t_end", fmt_float(self.t_end));
        line("cfl", fmt_float(self.cfl_fraction));
        line("snapshot_every", fmt_float(self.snapshot_every));
        line("level", fmt_float(self.level));
        line("discard", fmt_float(self.discard_fraction));
        line("out", self.output_path.display().to_string());
        if let Some(j) = self.jobs {
            line("jobs", j.to_string());
        }
        line("amplitude", fmt_float(self.amplitude));
        line("width", fmt_float(self.width));
        if let Some(c) = self.center {
            line("center", fmt_float(c));
        }
        line("report_every", fmt_float(self.report_every));
        line("nonlinear", self.nonlinear.to_string());
        line("lab_frame", self.lab_frame.to_string());
        out
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(|&v| fmt_float(v)).collect::<Vec<_>>().join(",")
}

/// Raw settings before defaults are applied.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub command: Option<Command>,
    pub preset: Option<String>,
    pub epsilon: Option<Vec<f64>>,
    pub speed: Option<f64>,
    pub growth: Option<String>,
    pub rate: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub dx: Option<f64>,
    pub t_end: Option<f64>,
    pub cfl: Option<f64>,
    pub snapshot_every: Option<f64>,
    pub level: Option<f64>,
    pub discard: Option<f64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub amplitude: Option<f64>,
    pub width: Option<f64>,
    pub center: Option<f64>,
    pub report_every: Option<f64>,
    pub nonlinear: Option<bool>,
    pub lab_frame: Option<bool>,
}

fn value_error(field: &str, message: impl Into<String>) -> Error {
    Error::ConfigValue {
        field: field.to_string(),
        message: message.into(),
    }
}

fn number(field: &str, raw: &str) -> Result<f64> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| value_error(field, format!("`{raw}` is not a number")))?;
    if !v.is_finite() {
        return Err(value_error(field, format!("`{raw}` is not finite")));
    }
    Ok(v)
}

fn boolean(field: &str, raw: &str) -> Result<bool> {
    match raw.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(value_error(field, format!("`{other}` is not a boolean"))),
    }
}

fn parse_command(raw: &str) -> Result<Command> {
    Ok(match raw.trim() {
        "simulate" => Command::Simulate,
        "profile" => Command::Profile,
        "dispersion" => Command::Dispersion,
        "speedscan" => Command::Speedscan,
        "stability" => Command::Stability,
        other => return Err(value_error("command", format!("unknown command `{other}`"))),
    })
}

impl Settings {
    /// Sets one key; dashes and underscores in the key are interchangeable.
    pub fn set(&mut self, key: &str, raw: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let raw = raw.trim();
        match key.as_str() {
            "command" => self.command = Some(parse_command(raw)?),
            "preset" => self.preset = Some(raw.to_string()),
            "epsilon" => {
                let list = raw
                    .split(',')
                    .map(|p| number("epsilon", p))
                    .collect::<Result<Vec<f64>>>()?;
                self.epsilon = Some(list);
            }
            "speed" => self.speed = Some(number("speed", raw)?),
            "growth" => self.growth = Some(raw.to_string()),
            "rate" => self.rate = Some(number("rate", raw)?),
            "a" => self.a = Some(number("a", raw)?),
            "b" => self.b = Some(number("b", raw)?),
            "dx" => self.dx = Some(number("dx", raw)?),
            "t_end" => self.t_end = Some(number("t_end", raw)?),
            "cfl" => self.cfl = Some(number("cfl", raw)?),
            "snapshot_every" => self.snapshot_every = Some(number("snapshot_every", raw)?),
            "level" => self.level = Some(number("level", raw)?),
            "discard" => self.discard = Some(number("discard", raw)?),
            "out" => self.out = Some(PathBuf::from(raw)),
            "jobs" => {
                let j: usize = raw
                    .parse()
                    .map_err(|_| value_error("jobs", format!("`{raw}` is not a positive integer")))?;
                self.jobs = Some(j);
            }
            "amplitude" => self.amplitude = Some(number("amplitude", raw)?),
            "width" => self.width = Some(number("width", raw)?),
            "center" => self.center = Some(number("center", raw)?),
            "report_every" => self.report_every = Some(number("report_every", raw)?),
            "nonlinear" => self.nonlinear = Some(boolean("nonlinear", raw)?),
            "lab_frame" => self.lab_frame = Some(boolean("lab_frame", raw)?),
            other => return Err(value_error(other, "unknown key")),
        }
        Ok(())
    }

    /// Parses a `key = value` file; `#` starts a comment.
    pub fn from_file_str(text: &str) -> Result<Self> {
        let mut s = Settings::default();
        for (k, raw_line) in text.lines().enumerate() {
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::ConfigParse {
                line: k + 1,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            s.set(key, value).map_err(|e| match e {
                Error::ConfigValue { field, message } => Error::ConfigParse {
                    line: k + 1,
                    message: format!("`{field}`: {message}"),
                },
                other => other,
            })?;
        }
        Ok(s)
    }

    /// Fields set in `other` replace those in `self`.
    pub fn overlay(mut self, other: Settings) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(
            command, preset, epsilon, speed, growth, rate, a, b, dx, t_end, cfl, snapshot_every, level, discard, out,
            jobs, amplitude, width, center, report_every, nonlinear, lab_frame
        );
        self
    }

    /// Applies the preset, then per-command defaults, and validates.
    pub fn resolve(self) -> Result<ExperimentConfig> {
        let command = self
            .command
            .ok_or_else(|| value_error("command", "no command given"))?;
        let preset = match self.preset.as_deref() {
            None => Settings::default(),
            Some(name) => preset(name)?,
        };
        let s = preset.overlay(self);

        let epsilon = s.epsilon.clone().unwrap_or_else(|| match command {
            Command::Speedscan | Command::Dispersion => vec![0.5, 1.0, 2.0],
            _ => vec![0.5],
        });
        if epsilon.is_empty() {
            return Err(value_error("epsilon", "no value given"));
        }
        if epsilon.len() > 1 && !command.takes_epsilon_list() {
            return Err(value_error(
                "epsilon",
                format!("`{}` takes a single value, got {}", command.name(), epsilon.len()),
            ));
        }
        for &e in &epsilon {
            if e <= 0.0 {
                return Err(value_error("epsilon", format!("must be positive, got {e}")));
            }
        }
        if let Some(sp) = s.speed {
            if sp <= 0.0 {
                return Err(value_error("speed", format!("must be positive, got {sp}")));
            }
        }
        let growth = match s.growth.as_deref().unwrap_or("logistic") {
            "logistic" => GrowthSpec::Logistic {
                rate: s.rate.unwrap_or(1.0),
            },
            other => return Err(value_error("growth", format!("unknown growth `{other}` (supported: logistic)"))),
        };
        let g = growth
            .build()
            .map_err(|e| value_error("rate", e.to_string()))?;

        let (a0, b0, dx0, t0) = match command {
            Command::Stability => {
                if classify(epsilon[0], &g) == Regime::Parabolic {
                    (-40.0, 40.0, 0.0125, 20.0)
                } else {
                    (-60.0, 0.0, 0.05, 20.0)
                }
            }
            _ => (-30.0, 120.0, 0.05, 60.0),
        };
        let a = s.a.unwrap_or(a0);
        let b = s.b.unwrap_or(b0);
        let dx = s.dx.unwrap_or(dx0);
        if a >= b {
            return Err(value_error("b", format!("need a < b, got a = {a}, b = {b}")));
        }
        let grid = GridSpec::with_dx(a, b, dx).map_err(|e| value_error("dx", e.to_string()))?;
        if (command == Command::Simulate || command == Command::Speedscan)
            && !(a < 0.0 && 0.0 < b) {
                return Err(value_error("a", format!("step data needs a < 0 < b, got [{a}, {b}]")));
            }
        let t_end = s.t_end.unwrap_or(t0);
        if t_end <= 0.0 {
            return Err(value_error("t_end", format!("must be positive, got {t_end}")));
        }
        let cfl_fraction = s.cfl.unwrap_or(0.9);
        if !(cfl_fraction > 0.0 && cfl_fraction < 1.0) {
            return Err(value_error("cfl", format!("must lie in (0, 1), got {cfl_fraction}")));
        }
        let snapshot_every = s.snapshot_every.unwrap_or(1.0);
        if snapshot_every <= 0.0 {
            return Err(value_error("snapshot_every", format!("must be positive, got {snapshot_every}")));
        }
        let level = s.level.unwrap_or(0.5);
        if !(level > 0.0 && level < 1.0) {
            return Err(value_error("level", format!("must lie in (0, 1), got {level}")));
        }
        let discard_fraction = s.discard.unwrap_or(0.5);
        if !(0.0..1.0).contains(&discard_fraction) {
            return Err(value_error("discard", format!("must lie in [0, 1), got {discard_fraction}")));
        }
        if s.jobs == Some(0) {
            return Err(value_error("jobs", "must be at least 1"));
        }
        let amplitude = s.amplitude.unwrap_or(0.01);
        let width = s.width.unwrap_or(2.0);
        if width <= 0.0 {
            return Err(value_error("width", format!("must be positive, got {width}")));
        }
        let report_every = s.report_every.unwrap_or(0.5);
        if report_every <= 0.0 {
            return Err(value_error("report_every", format!("must be positive, got {report_every}")));
        }
        Ok(ExperimentConfig {
            command,
            preset: s.preset,
            epsilon,
            speed: s.speed,
            growth,
            grid,
            t_end,
            cfl_fraction,
            snapshot_every,
            level,
            discard_fraction,
            output_path: s.out.unwrap_or_else(|| PathBuf::from("out")),
            jobs: s.jobs,
            amplitude,
            width,
            center: s.center,
            report_every,
            nonlinear: s.nonlinear.unwrap_or(false),
            lab_frame: s.lab_frame.unwrap_or(false),
        })
    }
}

/// Named presets for the three panels of the step experiment.
pub fn preset(name: &str) -> Result<Settings> {
    let (eps, t_end) = match name {
        "fig1a" => (0.5, 60.0),
        "fig1b" => (1.0, 60.0),
        "fig1c" => (2.0, 120.0),
        other => {
            return Err(value_error(
                "preset",
                format!("unknown preset `{other}` (known: fig1a, fig1b, fig1c)"),
            ))
        }
    };
    Ok(Settings {
        epsilon: Some(vec![eps]),
        t_end: Some(t_end),
        ..Settings::default()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(command: Command, pairs: &[(&str, &str)]) -> Settings {
        let mut s = Settings {
            command: Some(command),
            ..Settings::default()
        };
        for (k, v) in pairs {
            s.set(k, v).unwrap();
        }
        s
    }

    #[test]
    fn flags_and_defaults() {
        let c = settings(Command::Simulate, &[("epsilon", "0.5"), ("growth", "logistic"), ("rate", "1")])
            .resolve()
            .unwrap();
        assert_eq!(c.epsilon, vec![0.5]);
        assert_eq!(c.growth, GrowthSpec::Logistic { rate: 1.0 });
        assert_eq!(c.grid.n_cells, 3000);
        assert_eq!(c.t_end, 60.0);
    }

    #[test]
    fn flags_override_file() {
        let file = Settings::from_file_str("# fig 1c\nepsilon = 2\nt_end = 120\n").unwrap();
        let flags = settings(Command::Simulate, &[("t-end", "60")]);
        let c = file.overlay(flags).resolve().unwrap();
        assert_eq!(c.t_end, 60.0);
        assert_eq!(c.epsilon, vec![2.0]);
    }

    #[test]
    fn validation_names_the_field() {
        let err = settings(Command::Simulate, &[("epsilon", "-1")]).resolve().unwrap_err();
        assert!(matches!(&err, Error::ConfigValue { field, .. } if field == "epsilon"));
        assert!(err.is_validation());
        let err = settings(Command::Simulate, &[("cfl", "1.2")]).resolve().unwrap_err();
        assert!(matches!(&err, Error::ConfigValue { field, .. } if field == "cfl"));
        let err = settings(Command::Simulate, &[("epsilon", "0.5,1")]).resolve().unwrap_err();
        assert!(matches!(&err, Error::ConfigValue { field, .. } if field == "epsilon"));
    }

    #[test]
    fn file_errors_carry_line_numbers() {
        let err = Settings::from_file_str("epsilon = 1\n\nbogus = 3\n").unwrap_err();
        assert!(matches!(err, Error::ConfigParse { line: 3, .. }), "{err}");
        let err = Settings::from_file_str("epsilon 1\n").unwrap_err();
        assert!(matches!(err, Error::ConfigParse { line: 1, .. }));
        let err = Settings::from_file_str("dx = fast\n").unwrap_err();
        assert!(matches!(err, Error::ConfigParse { line: 1, .. }));
    }

    #[test]
    fn presets() {
        let c = settings(Command::Simulate, &[("preset", "fig1c")]).resolve().unwrap();
        assert_eq!((c.epsilon[0], c.t_end), (2.0, 120.0));
        let c = settings(Command::Simulate, &[("preset", "fig1c"), ("t_end", "10")])
            .resolve()
            .unwrap();
        assert_eq!(c.t_end, 10.0);
        assert!(settings(Command::Simulate, &[("preset", "fig9")]).resolve().is_err());
    }

    #[test]
    fn stability_grid_depends_on_regime() {
        let c = settings(Command::Stability, &[("epsilon", "0.5")]).resolve().unwrap();
        assert_eq!((c.grid.a, c.grid.b, c.grid.dx), (-40.0, 40.0, 0.0125));
        let c = settings(Command::Stability, &[("epsilon", "2")]).resolve().unwrap();
        assert_eq!((c.grid.a, c.grid.b), (-60.0, 0.0));
    }

    #[test]
    fn file_round_trip() {
        let c = settings(
            Command::Speedscan,
            &[("epsilon", "0.3,0.7,1.9"), ("speed", "1.25"), ("jobs", "3"), ("center", "-2.5"), ("nonlinear", "true")],
        )
        .resolve()
        .unwrap();
        let text = c.to_file_string();
        let back = Settings::from_file_str(&text).unwrap().resolve().unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_file_string(), text);
    }
}
