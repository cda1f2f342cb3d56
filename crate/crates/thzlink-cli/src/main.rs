//! Terahertz link simulator command line.
//!
//! Every subcommand reads one resolved configuration, writes a CSV (plus an
//! optional SVG) into the output directory, echoes the configuration next to
//! the artifacts and keeps a content-addressed cache so identical runs are
//! served from disk. Failures print a single machine-parsable line.

// `!(x > 0.0)` in validations also rejects NaN, which `x <= 0.0` would accept
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cache;
mod commands;
mod config;
mod error;
mod svg;

use std::borrow::Cow;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::cache::{Artifact, Workspace};
use crate::commands::CatalogInput;
use crate::config::{GridSection, RunConfig};
use crate::error::{CliError, Result};

#[derive(Parser)]
#[command(name = "thzlink", version, about = "Terahertz link and secrecy simulator")]
struct Cli {
    #[command(subcommand)]
    command: CommandKind,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct CommonOpts {
    /// TOML configuration file merged over the defaults
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Also render an SVG plot
    #[arg(long, global = true)]
    svg: bool,
    /// Recompute even when a cached result exists
    #[arg(long, global = true)]
    no_cache: bool,
    /// Evaluation grid override
    #[arg(long, global = true, value_name = "F_START:F_STOP:N")]
    grid: Option<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum CommandKind {
    /// Absorption coefficient spectra at several altitudes
    KSpectrum,
    /// Link budget versus distance at a fixed carrier
    Loss,
    /// Transmission windows under a path-loss ceiling
    Windows,
    /// Weather attenuation spectra
    Weather,
    /// Absorption coefficient versus altitude at chosen frequencies
    AltitudeSweep,
    /// Secrecy rates versus eavesdropper distance
    SecrecySweep,
    /// TS-OOK capacity over the pulse probability
    Tsook,
}

impl CommandKind {
    fn name(self) -> &'static str {
        match self {
            Self::KSpectrum => "k-spectrum",
            Self::Loss => "loss",
            Self::Windows => "windows",
            Self::Weather => "weather",
            Self::AltitudeSweep => "altitude-sweep",
            Self::SecrecySweep => "secrecy-sweep",
            Self::Tsook => "tsook",
        }
    }

    /// Grid this command evaluates over when neither the file nor the flag
    /// provides one. Commands without a spectral sweep have no grid to fill.
    fn default_grid(self) -> Option<GridSection> {
        match self {
            Self::KSpectrum | Self::Windows => Some(GridSection::new(1e11, 2e12, 10_000)),
            Self::Weather => Some(GridSection::new(1e11, 2e12, 1_000)),
            Self::SecrecySweep => Some(GridSection::new(2.8e11, 3.4e11, 601)),
            Self::Loss | Self::AltitudeSweep | Self::Tsook => None,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = err.print();
                return ExitCode::SUCCESS;
            }
            let text = err.to_string();
            let first = text
                .lines()
                .find(|line| !line.trim().is_empty())
                .unwrap_or("invalid arguments");
            eprintln!("error[usage]: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut config = match &cli.common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(spec) = &cli.common.grid {
        config.grid = Some(GridSection::parse_flag(spec)?);
    }
    if let Some(out) = &cli.common.out {
        config.output.dir = out.display().to_string();
    }
    if cli.common.svg {
        config.output.svg = true;
    }
    if cli.common.no_cache {
        config.output.cache = false;
    }
    let kind = cli.command;
    if let Some(fallback) = kind.default_grid() {
        config.materialize_grid(fallback);
    }

    let catalog_text: Cow<'static, str> = if config.catalog.path.is_empty() {
        Cow::Borrowed(thzlink::catalog::BUILTIN_TABLE)
    } else {
        let path = PathBuf::from(&config.catalog.path);
        Cow::Owned(std::fs::read_to_string(&path).map_err(|e| CliError::io(path, e))?)
    };
    let catalog = CatalogInput {
        text: &catalog_text,
        format: config.catalog.format.into(),
    };

    let workspace = Workspace::new(kind.name(), &config, catalog_text.as_bytes())?;
    if let Some(artifacts) = workspace.restore() {
        for path in workspace.publish(&artifacts, false)? {
            println!("wrote {} (cached)", path.display());
        }
        return Ok(());
    }

    let outputs = match kind {
        CommandKind::KSpectrum => commands::k_spectrum(&config, &catalog),
        CommandKind::Loss => commands::loss(&config, &catalog),
        CommandKind::Windows => commands::windows(&config, &catalog),
        CommandKind::Weather => commands::weather(&config),
        CommandKind::AltitudeSweep => commands::altitude_sweep(&config, &catalog),
        CommandKind::SecrecySweep => commands::secrecy_sweep(&config, &catalog),
        CommandKind::Tsook => commands::tsook(&config),
    }?;

    let mut artifacts: Vec<Artifact> =
        vec![(format!("{}.csv", kind.name()), outputs.csv.into_bytes())];
    if let Some(svg) = outputs.svg {
        artifacts.push((format!("{}.svg", kind.name()), svg.into_bytes()));
    }
    for path in workspace.publish(&artifacts, true)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
