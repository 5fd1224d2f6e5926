//! `batecho`: exact return statistics, tree forging, and spectral-gap
//! estimation from the command line.

mod commands;
mod config;

use std::process::ExitCode;

use batecho::exact::ExactError;
use batecho::gap::GapError;
use batecho::ratfun::ForgeError;
use batecho::report::ReportError;
use clap::{Parser, Subcommand};
use thiserror::Error;

use config::{CommonArgs, GapArgs};

#[derive(Debug, Parser)]
#[command(
    name = "batecho",
    version,
    about = "Spectral information from the return times of a random walk"
)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact series, generating function, spectrum and hitting time.
    Exact {
        /// Last step count in the series tables.
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Build two non-isomorphic trees with identical return-time laws.
    Forge {
        /// Composite number selecting the three building blocks.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Estimate the spectral gap of the lazy walk.
    Gap(GapArgs),
    /// Estimate 1 - max(λ₂, |λ_n|) from the walk observed every other step.
    MixingGap(GapArgs),
    /// Reconstruct counts, parity and hitting time from observed returns.
    Observe {
        /// Number of return gaps to observe.
        #[arg(long)]
        m: Option<u64>,
    },
    /// Run experiments and log each one as a JSON line.
    Simulate {
        /// Target return time of each experiment.
        #[arg(long)]
        k: Option<u64>,
        /// Number of experiments.
        #[arg(long)]
        count: Option<u64>,
        /// Use the lazy walk.
        #[arg(long)]
        lazy: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Gap(#[from] GapError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Forge(#[from] ForgeError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Forge(ForgeError::NoThreeDivisorPairs { .. }) => 2,
            CliError::Gap(GapError::InvalidParams(_)) => 2,
            CliError::Gap(GapError::SearchExhausted { .. }) => 3,
            CliError::Gap(GapError::BudgetOverflow { .. }) => 4,
            _ => 1,
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("BATECHO_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Config(format!("BATECHO_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let file = config::FileConfig::load(cli.common.config.as_deref())?;
    match cli.command {
        Command::Exact { k_max } => commands::exact(&cli.common, &file, k_max),
        Command::Forge { k } => commands::forge(&cli.common, &file, k),
        Command::Gap(args) => commands::gap(&cli.common, &file, &args, false),
        Command::MixingGap(args) => commands::gap(&cli.common, &file, &args, true),
        Command::Observe { m } => commands::observe(&cli.common, &file, m),
        Command::Simulate { k, count, lazy } => commands::simulate(&cli.common, &file, k, count, lazy),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
