//! The five subcommands. Each writes CSV files under the output directory and
//! a few summary lines to `log`.

use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::dispersion::{discriminant_one, discriminant_zero, minimal_speed, WaveParameters};
use crate::error::{Error, Result};
use crate::profile::{build_front, residual, ProfileOptions};

use super::config::{Command, ExperimentConfig};
use super::experiments::{run_stability, run_stability_lab, simulate, SimulationSetup, StabilitySetup};
use super::output::{fmt_float, Cell, CsvWriter};

/// Files written by a command.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Written {
    pub files: Vec<PathBuf>,
}

pub fn execute(config: &ExperimentConfig, log: &mut dyn Write) -> Result<Written> {
    match config.command {
        Command::Simulate => cmd_simulate(config, log),
        Command::Profile => cmd_profile(config, log),
        Command::Dispersion => cmd_dispersion(config, log),
        Command::Speedscan => cmd_speedscan(config, log),
        Command::Stability => cmd_stability(config, log),
    }
}

fn simulation_setup(config: &ExperimentConfig, epsilon: f64) -> SimulationSetup {
    SimulationSetup {
        epsilon,
        grid: config.grid,
        t_end: config.t_end,
        cfl_fraction: config.cfl_fraction,
        snapshot_every: config.snapshot_every,
        level: config.level,
        discard_fraction: config.discard_fraction,
    }
}

fn relative_error(measured: f64, expected: f64) -> f64 {
    (measured - expected).abs() / expected
}

pub fn cmd_simulate(config: &ExperimentConfig, log: &mut dyn Write) -> Result<Written> {
    let g = config.growth.build()?;
    let eps = config.first_epsilon();
    let setup = simulation_setup(config, eps);
    let dir = &config.output_path;
    let x = config.grid.centers();
    let mut fields = CsvWriter::create(&dir.join("snapshots.csv"), config, &["t", "x", "rho", "j"])?;
    let mut write_failure = None;
    let outcome = simulate(&setup, &g, |t, st| {
        if write_failure.is_some() {
            return;
        }
        for i in 0..x.len() {
            let (p, m) = (st.f_plus[i], st.f_minus[i]);
            if let Err(e) = fields.row(&[t.into(), x[i].into(), (p + m).into(), (p - m).into()]) {
                write_failure = Some(e);
                return;
            }
        }
    })?;
    if let Some(e) = write_failure {
        return Err(e);
    }
    let mut written = Written::default();
    written.files.push(fields.finish()?);

    let mut speed = CsvWriter::create(&dir.join("speed.csv"), config, &["t", "position", "fitted"])?;
    let (from, to) = outcome.speed.window;
    for (&t, &p) in outcome.speed.times.iter().zip(&outcome.speed.positions) {
        let fitted = if (from..=to).contains(&t) { "yes" } else { "no" };
        speed.row(&[t.into(), p.into(), fitted.into()])?;
    }
    written.files.push(speed.finish()?);

    writeln!(log, "epsilon = {eps}")?;
    writeln!(log, "regime = {:?}", outcome.regime)?;
    writeln!(log, "s_star_theory = {}", fmt_float(outcome.s_star))?;
    writeln!(log, "s_measured = {}", fmt_float(outcome.speed.speed))?;
    writeln!(log, "rel_error = {}", fmt_float(relative_error(outcome.speed.speed, outcome.s_star)))?;
    writeln!(log, "fit_r_squared = {}", fmt_float(outcome.speed.r_squared))?;
    writeln!(log, "rho_min = {}", fmt_float(outcome.rho_range.0))?;
    writeln!(log, "rho_max = {}", fmt_float(outcome.rho_range.1))?;
    if let Some(c) = outcome.profile_error {
        writeln!(log, "profile_shift = {}", fmt_float(c.shift))?;
        writeln!(log, "profile_linf_error = {}", fmt_float(c.linf_error))?;
    }
    if let (Some(sh), Some(theta)) = (outcome.sharpness, outcome.theta) {
        writeln!(log, "theta = {theta}")?;
        writeln!(log, "jump_width_cells = {}", sh.width_cells)?;
        writeln!(log, "jump_back_value = {}", fmt_float(sh.back_value))?;
    }
    Ok(written)
}

pub fn cmd_profile(config: &ExperimentConfig, log: &mut dyn Write) -> Result<Written> {
    let g = config.growth.build()?;
    let eps = config.first_epsilon();
    let s = config.speed.unwrap_or_else(|| minimal_speed(eps, &g));
    let params = WaveParameters::new(eps, s, &g)?;
    let (profile, orbit) = build_front(&params, &g, &ProfileOptions::default())?;
    let residual_max = if profile.kind.is_smooth() {
        Some(residual(&profile, &g)?.max_abs)
    } else {
        None
    };
    let opt = |v: Option<f64>| v.map_or_else(|| "none".to_string(), fmt_float);
    let mut meta = vec![
        ("kind", format!("{:?}", profile.kind)),
        ("speed_used", fmt_float(s)),
        ("theta", opt(params.theta)),
        ("lambda", opt(params.lambda)),
        ("residual", opt(residual_max)),
    ];
    if let Some(edge) = profile.support_edge() {
        meta.push(("support_edge", fmt_float(edge)));
    }
    let dir = &config.output_path;
    let mut written = Written::default();

    let mut table = CsvWriter::create_with(&dir.join("profile.csv"), config, &meta, &["z", "nu"])?;
    for (&z, &nu) in profile.z.iter().zip(&profile.nu) {
        table.row(&[z.into(), nu.into()])?;
    }
    written.files.push(table.finish()?);
    if let Some(orbit) = &orbit {
        let mut table = CsvWriter::create_with(&dir.join("orbit.csv"), config, &meta, &["v", "p"])?;
        for (&v, &p) in orbit.v.iter().zip(&orbit.p) {
            table.row(&[v.into(), p.into()])?;
        }
        written.files.push(table.finish()?);
    }

    writeln!(log, "epsilon = {}", fmt_float(eps))?;
    for (key, value) in &meta {
        writeln!(log, "{key} = {value}")?;
    }
    writeln!(log, "samples = {}", profile.z.len())?;
    Ok(written)
}

pub fn cmd_dispersion(config: &ExperimentConfig, log: &mut dyn Write) -> Result<Written> {
    let g = config.growth.build()?;
    let columns = [
        "epsilon",
        "regime",
        "s_star",
        "speed",
        "lambda",
        "lambda_prime",
        "theta",
        "disc_zero",
        "disc_one",
    ];
    let mut table = CsvWriter::create(&config.output_path.join("dispersion.csv"), config, &columns)?;
    for &eps in &config.epsilon {
        let s = config.speed.unwrap_or_else(|| minimal_speed(eps, &g));
        let p = WaveParameters::new(eps, s, &g)?;
        table.row(&[
            eps.into(),
            format!("{:?}", p.regime).to_lowercase().into(),
            p.s_star.into(),
            s.into(),
            p.lambda.into(),
            p.lambda_prime.into(),
            p.theta.into(),
            discriminant_zero(eps, s, &g).into(),
            discriminant_one(eps, s, &g).into(),
        ])?;
        writeln!(log, "epsilon = {eps}: {:?}, s* = {}", p.regime, p.s_star)?;
    }
    Ok(Written {
        files: vec![table.finish()?],
    })
}

pub fn cmd_speedscan(config: &ExperimentConfig, log: &mut dyn Write) -> Result<Written> {
    let g = config.growth.build()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::ConfigValue {
            field: "jobs".into(),
            message: e.to_string(),
        })?;
    let results: Vec<(f64, f64, Result<f64>)> = pool.install(|| {
        config
            .epsilon
            .par_iter()
            .map(|&eps| {
                let measured = simulate(&simulation_setup(config, eps), &g, |_, _| {}).map(|o| o.speed.speed);
                (eps, minimal_speed(eps, &g), measured)
            })
            .collect()
    });
    let columns = ["epsilon", "s_star_theory", "s_measured", "rel_error", "status"];
    let mut table = CsvWriter::create(&config.output_path.join("speedscan.csv"), config, &columns)?;
    for (eps, s_star, measured) in &results {
        match measured {
            Ok(s) => {
                let rel = relative_error(*s, *s_star);
                table.row(&[(*eps).into(), (*s_star).into(), (*s).into(), rel.into(), "ok".into()])?;
                writeln!(log, "epsilon = {eps}: s* = {s_star}, measured {s}, rel_error {}", fmt_float(rel))?;
            }
            Err(e) => {
                table.row(&[(*eps).into(), (*s_star).into(), Cell::Empty, Cell::Empty, format!("error: {e}").replace(',', ";").into()])?;
                writeln!(log, "epsilon = {eps}: failed: {e}")?;
            }
        }
    }
    Ok(Written {
        files: vec![table.finish()?],
    })
}

pub fn cmd_stability(config: &ExperimentConfig, log: &mut dyn Write) -> Result<Written> {
    let g = config.growth.build()?;
    let setup = StabilitySetup {
        cfl_fraction: config.cfl_fraction,
        report_every: config.report_every,
        amplitude: config.amplitude,
        width: config.width,
        center: config.center,
        source: config.source(),
        ..StabilitySetup::new(config.first_epsilon(), config.grid, config.t_end)
    };
    let outcome = if config.lab_frame {
        run_stability_lab(&setup, &g)?
    } else {
        run_stability(&setup, &g)?
    };
    let columns = ["t", "lyapunov", "e1u", "e2u", "e1w", "e2w", "e_combined", "sup_norm"];
    let mut table = CsvWriter::create(&config.output_path.join("energy.csv"), config, &columns)?;
    for r in &outcome.records {
        let e = r.energy.as_ref();
        table.row(&[
            r.t.into(),
            r.lyapunov.into(),
            e.map(|e| e.e1u).into(),
            e.map(|e| e.e2u).into(),
            e.map(|e| e.e1w).into(),
            e.map(|e| e.e2w).into(),
            e.map(|e| e.e_combined).into(),
            r.sup_norm.into(),
        ])?;
    }
    let sup = outcome.records.iter().fold(0.0, |m: f64, r| m.max(r.sup_norm));
    writeln!(log, "epsilon = {}", fmt_float(setup.epsilon))?;
    writeln!(log, "kind = {:?}", outcome.profile.kind)?;
    writeln!(log, "reports = {}", outcome.records.len())?;

    writeln!(log, "worst_growth_lyapunov = {}", fmt_float(outcome.worst_growth(|r| r.lyapunov)))?;
    if outcome.records.iter().all(|r| r.energy.is_some()) {
        let growth = outcome.worst_growth(|r| r.energy.as_ref().map_or(f64::NAN, |e| e.e_combined));
        writeln!(log, "worst_growth_e_combined = {}", fmt_float(growth))?;
    }
    writeln!(log, "max_sup_norm = {}", fmt_float(sup))?;
    Ok(Written {
        files: vec![table.finish()?],
    })
}
