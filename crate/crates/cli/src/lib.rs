//! Command-line front-end for the `fuzzy-saving` models.
//!
//! Every command reads one JSON [`config::RunConfig`]; `solve` and `compare`
//! emit JSON reports, `sweep` emits CSV (or JSON) over a one-dimensional grid
//! and `verify` runs a battery of consistency checks on the configured
//! problem.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use commands::SweepFormat;
use config::RunConfig;
pub use error::{CliError, ExitKind};

#[derive(Debug, Parser)]
#[command(name = "fuzzy-saving", version, about = "Optimal saving under certain, random and fuzzy returns")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one model for its optimal saving.
    Solve(CommonArgs),
    /// Solve all three models and evaluate the sign conditions.
    Compare(CommonArgs),
    /// Run `compare` over a one-dimensional parameter grid.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Check concavity, residuals, degeneracy and predicate consistency.
    Verify(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override `numerics.nodes`.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Override `numerics.seed` (Monte Carlo oracle in `verify`).
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

/// What a command produced: the body to write, plus a failure to report
/// after writing it (only `verify` produces both).
#[derive(Debug)]
pub struct Output {
    pub body: String,
    pub out: Option<PathBuf>,
    pub failure: Option<CliError>,
}

fn load(args: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(n) = args.nodes {
        cfg.numerics.nodes = n;
    }
    if let Some(s) = args.seed {
        cfg.numerics.seed = s;
    }
    Ok(cfg)
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let done = |body: String, args: &CommonArgs| Output { body, out: args.out.clone(), failure: None };
    match &cli.command {
        Command::Solve(args) => Ok(done(commands::solve(&load(args)?)?, args)),
        Command::Compare(args) => Ok(done(commands::compare(&load(args)?)?, args)),
        Command::Sweep { common, format } => {
            let format = match format {
                FormatArg::Csv => SweepFormat::Csv,
                FormatArg::Json => SweepFormat::Json,
            };
            Ok(done(commands::sweep(&load(common)?, format)?, common))
        }
        Command::Verify(args) => {
            let report = commands::verify_report(&load(args)?)?;
            let failure = report
                .first_failure()
                .map(|c| CliError::verification(format!("{}: {}", c.name, c.detail)));
            Ok(Output { body: commands::verify_json(&report), out: args.out.clone(), failure })
        }
    }
}
