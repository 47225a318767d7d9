use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use maximin_bandits::harness::{
    self, AnchorSpec, ClassSpec, ExperimentConfig, ExperimentKind, OutputFormat,
};
use maximin_bandits::{Error, Result};

#[derive(Parser)]
#[command(version, about = "Maximin-volume analysis and best-arm experiments for finite bandit classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Experiment description (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Maximin volume of a class with its certificate.
    Gamma {
        #[command(flatten)]
        common: Common,
        /// Class file: an inline class or a constructor spec.
        #[arg(long)]
        class: Option<PathBuf>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Decision-estimation coefficient by candidate search.
    Dec {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        class: Option<PathBuf>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        resolution: Option<f64>,
        /// `vertices`, `vertices+midpoints`, or a JSON file of mixtures.
        #[arg(long)]
        anchors: Option<String>,
    },
    /// Monte Carlo trials of one learner.
    Run {
        #[command(flatten)]
        common: Common,
    },
    /// One Monte Carlo experiment per grid cell.
    Sweep {
        #[command(flatten)]
        common: Common,
    },
    /// Coin-flip lower-bound certificate for a small-budget learner.
    Certify {
        #[command(flatten)]
        common: Common,
    },
    /// Tree descent against the uniform non-adaptive baseline.
    Adaptivity {
        #[command(flatten)]
        common: Common,
    },
    /// Histogram surrogate of a Gaussian with its TV distance.
    Discretize {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
    },
}

fn load_config(kind: ExperimentKind, common: &Common) -> Result<ExperimentConfig> {
    let mut config = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let config: ExperimentConfig = serde_json::from_str(&text)?;
            if config.kind != kind {
                return Err(Error::Config(format!(
                    "config is for `{:?}` but the `{:?}` command was given",
                    config.kind, kind
                )));
            }
            config
        }
        None => ExperimentConfig::new(kind),
    };
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(out) = &common.out {
        config.out = Some(out.display().to_string());
    }
    if let Some(format) = common.format {
        config.format = match format {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        };
    }
    if let Some(trials) = common.trials {
        config.trials = trials;
    }
    Ok(config)
}

fn read_class(path: &Path) -> Result<ClassSpec> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// Writes to stdout; a reader that closed the pipe early is not an error.
fn stdout(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn emit_text(text: &str, out: Option<&str>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout(text)?,
    }
    Ok(())
}

fn emit_json<T: Serialize>(value: &T, out: Option<&str>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit_text(&text, out)
}

/// Writes a table to `--out` (or stdout) and the summary to stdout (or
/// stderr when the table went to stdout).
fn emit_table<T: Serialize, S: Serialize>(rows: &[T], summary: &S, config: &ExperimentConfig) -> Result<()> {
    let table = harness::rows_to_string(rows, config.format)?;
    let summary = serde_json::to_string_pretty(summary)?;
    match config.out.as_deref() {
        Some(path) => {
            std::fs::write(path, table)?;
            stdout(&format!("{summary}\n"))?;
        }
        None => {
            stdout(&table)?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gamma {
            common,
            class,
            alpha,
            tolerance,
        } => {
            let mut config = load_config(ExperimentKind::Gamma, &common)?;
            if let Some(path) = class {
                config.class = Some(read_class(&path)?);
            }
            config.alpha = alpha.or(config.alpha);
            config.tolerance = tolerance.or(config.tolerance);
            config.validate()?;
            let report = harness::run_gamma(&config)?;
            emit_json(&report, config.out.as_deref())?;
            Ok(report.verified)
        }
        Command::Dec {
            common,
            class,
            eps,
            alpha,
            resolution,
            anchors,
        } => {
            let mut config = load_config(ExperimentKind::Dec, &common)?;
            if let Some(path) = class {
                config.class = Some(read_class(&path)?);
            }
            config.eps = eps.or(config.eps);
            config.alpha = alpha.or(config.alpha);
            config.resolution = resolution.or(config.resolution);
            if let Some(a) = anchors {
                config.anchors = Some(match a.as_str() {
                    "vertices" | "vertices+midpoints" => AnchorSpec::Named(a),
                    file => AnchorSpec::Explicit(serde_json::from_str(&std::fs::read_to_string(file)?)?),
                });
            }
            config.validate()?;
            emit_json(&harness::run_dec(&config)?, config.out.as_deref())?;
            Ok(true)
        }
        Command::Run { common } => {
            let config = load_config(ExperimentKind::Run, &common)?;
            config.validate()?;
            let out = harness::run_monte_carlo(&config)?;
            emit_table(&out.records, &out.summary, &config)?;
            Ok(true)
        }
        Command::Sweep { common } => {
            let config = load_config(ExperimentKind::Sweep, &common)?;
            let out = harness::run_sweep(&config)?;
            let failed = out.rows.iter().filter(|r| r.error.is_some()).count();
            emit_table(
                &out.rows,
                &serde_json::json!({ "cells": out.rows.len(), "failed_cells": failed }),
                &config,
            )?;
            Ok(true)
        }
        Command::Certify { common } => {
            let config = load_config(ExperimentKind::Certify, &common)?;
            config.validate()?;
            let report = harness::run_certify(&config)?;
            emit_json(&report, config.out.as_deref())?;
            Ok(report.holds)
        }
        Command::Adaptivity { common } => {
            let config = load_config(ExperimentKind::Adaptivity, &common)?;
            config.validate()?;
            let mut report = harness::run_adaptivity(&config)?;
            let records = std::mem::take(&mut report.records);
            emit_table(&records, &report, &config)?;
            let separated = report
                .rows
                .iter()
                .all(|r| r.non_adaptive_failure_rate >= 0.5 - r.slack);
            Ok(separated && report.growth.as_ref().is_none_or(|g| g.is_linear()))
        }
        Command::Discretize {
            common,
            mu,
            sigma,
            eps,
        } => {
            let mut config = load_config(ExperimentKind::Discretize, &common)?;
            config.mu = mu.or(config.mu);
            config.sigma = sigma.or(config.sigma);
            config.eps = eps.or(config.eps);
            config.validate()?;
            let report = harness::run_discretize(&config)?;
            emit_json(&report, config.out.as_deref())?;
            Ok(report.within_bound)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
