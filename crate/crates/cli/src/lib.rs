//! Command-line runner for the `gafheat` library.
//!
//! Each subcommand writes plot-ready CSV (one file per table) or a single
//! JSON document into `--out`. Every file carries the full
//! [`ExperimentConfig`] and the library version, and a rerun with the same
//! flags reproduces it byte for byte.
//!
//! Exit codes: `0` on success, `1` on a hard error (bad input, domain
//! violation, I/O), `2` when `--strict` is set and a statistical check fails.

pub mod args;
pub mod commands;
pub mod config;
pub mod output;
pub mod spec;

pub use args::{Cli, Command, Format, Process};
pub use config::{ExperimentConfig, VERSION};
pub use output::{Cell, Report, Table};

use clap::Parser;
use std::ffi::OsString;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] gafheat::Error),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Files written by a run and whether its statistical checks passed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    pub statistical_pass: bool,
    pub config: ExperimentConfig,
}

/// Runs a parsed command line and writes its outputs.
pub fn run(cli: &Cli) -> Result<RunOutcome, CliError> {
    let cfg = ExperimentConfig::from_args(&cli.common, &cli.command)?;
    let report = match &cli.command {
        Command::Flow { spec, grid, radius } => commands::flow(&cfg, spec, *grid, *radius)?,
        Command::Trajectories { spec, count, radius } => commands::trajectories(&cfg, spec, *count, *radius)?,
        Command::Residuals { anchors, permutations } => commands::residuals(&cfg, anchors, *permutations)?,
        Command::MetaplecticCheck { pairs } => commands::metaplectic_check(&cfg, *pairs)?,
        Command::Covariance { sigma, grid, radius, process } => {
            let sigma = sigma.as_deref().map(spec::parse_complex).transpose()?;
            commands::covariance(&cfg, sigma, *grid, *radius, *process)?
        }
    };
    std::fs::create_dir_all(&cli.common.out)?;
    let files = match cfg.format {
        Format::Csv => output::write_csv(&cli.common.out, &cfg, &report)?,
        Format::Json => vec![output::write_json(&cli.common.out, &cfg, &report)?],
    };
    Ok(RunOutcome { files, statistical_pass: report.statistical_pass, config: cfg })
}

/// Parses `args`, runs, reports to stdout/stderr and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // Help and version requests are not errors; usage errors map to 1
            // so that 2 stays reserved for --strict failures.
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(out) => {
            for f in &out.files {
                println!("{}", f.display());
            }
            if !out.statistical_pass {
                eprintln!("warning: statistical check failed (see summary)");
                if cli.common.strict {
                    return 2;
                }
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
