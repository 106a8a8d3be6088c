use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use fbcsf_core::curve::DiscreteCurve;
use fbcsf_core::Point;
use serde::Deserialize;

mod config;
mod experiment;
mod svg;

use config::{ConfigError, DomainSpec, ExperimentConfig, PhiSpec};

#[derive(Parser)]
#[command(name = "fbcsf", version, about = "Free-boundary curve shortening flow experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config.
    Run { config: PathBuf },
    /// Extended chord-arc profile of a static curve.
    Profile {
        /// JSON file `{"points": [[x, y], ...]}`.
        curve: PathBuf,
        /// JSON domain spec, e.g. `{"kind": "disk", "radius": 1}`.
        #[arg(long)]
        domain: PathBuf,
        /// JSON comparison function spec.
        #[arg(long)]
        phi: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        bins: usize,
        #[arg(long, default_value = "out")]
        output_dir: PathBuf,
    },
    /// Print a complete config with every default spelled out.
    PrintDefaults,
    /// Parse and build a config without running it.
    Validate { config: PathBuf },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveFile {
    points: Vec<[f64; 2]>,
}

fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("reading {}: {e}", path.display())))?;
    config::parse_json(&text, path)
}

fn profile(curve: &Path, domain: &Path, phi: Option<&Path>, bins: usize, output_dir: PathBuf) -> Result<bool> {
    let domain = config::load::<DomainSpec>(domain)?.build().context("building domain")?;
    let points = config::load::<CurveFile>(curve)?.points;
    let curve = DiscreteCurve::new(&domain, points.into_iter().map(Point::from_f64).collect())?;
    let phi = match phi {
        Some(p) => Some(config::load::<PhiSpec>(p)?.build()?),
        None => None,
    };
    let dir = std::env::var_os(config::OUTPUT_DIR_ENV).map(PathBuf::from).unwrap_or(output_dir);
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let report = experiment::write_profile(&dir, "profile", &curve, &domain, bins, phi.as_ref())?;
    match report.min_z {
        Some(z) => println!("min Z = {z:.6e}; profile written to {}", dir.display()),
        None => println!("profile written to {}", dir.display()),
    }
    Ok(true)
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { config } => {
            let cfg = load_config(&config)?;
            let built = cfg.build()?;
            experiment::run(&cfg, built)
        }
        Command::Profile { curve, domain, phi, bins, output_dir } => {
            profile(&curve, &domain, phi.as_deref(), bins, output_dir)
        }
        Command::PrintDefaults => {
            println!("{}", serde_json::to_string_pretty(&ExperimentConfig::example())?);
            Ok(true)
        }
        Command::Validate { config } => {
            let cfg = load_config(&config)?;
            cfg.build()?;
            println!("{}: ok", config.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
