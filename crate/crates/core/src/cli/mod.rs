//! Command-line front end backing the `datashare` binary.
//!
//! Exit codes: 0 success, 2 invalid configuration or arguments, 3 utility
//! domain violation, 4 failed verification or simulation check, 5 I/O error.

pub mod commands;
pub mod config;

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use commands::Status;
pub use config::{Config, ConfigError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;
pub const EXIT_FAIL: u8 = 4;
pub const EXIT_IO: u8 = 5;

#[derive(Debug, Parser)]
#[command(name = "datashare", version, about = "Optimal insurance contracts for medical data sharing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArg {
    /// JSON configuration file.
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the optimal contract.
    Solve(ConfigArg),
    /// Cross-check the optimal contract against the grid oracle.
    Verify {
        #[command(flatten)]
        config: ConfigArg,
        /// Points per grid axis, overriding the config.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Write the configured parameter sweep as CSV.
    Sweep {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo check of the expected utility.
    Simulate(ConfigArg),
    /// Print regime thresholds.
    Thresholds(ConfigArg),
}

impl Command {
    pub fn config_path(&self) -> &Path {
        match self {
            Command::Solve(c) | Command::Simulate(c) | Command::Thresholds(c) => &c.config,
            Command::Verify { config, .. } | Command::Sweep { config, .. } => &config.config,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] crate::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    fn stdout(source: io::Error) -> Self {
        CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => EXIT_CONFIG,
            CliError::Model(e) if e.is_domain() => EXIT_DOMAIN,
            CliError::Model(crate::Error::EmptyFeasibleSet) => EXIT_FAIL,
            CliError::Model(_) => EXIT_CONFIG,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

/// Reads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<Config, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(config::load(path, &text)?)
}

/// Runs one command, writing its report to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Status, CliError> {
    let config = load_config(cli.command.config_path())?;
    match &cli.command {
        Command::Solve(_) => commands::solve(&config, out),
        Command::Verify { grid, .. } => commands::verify(&config, *grid, out),
        Command::Sweep { out: path, .. } => commands::sweep(&config, path, out),
        Command::Simulate(_) => commands::simulate(&config, out),
        Command::Thresholds(_) => commands::thresholds(&config, out),
    }
}

/// Entry point of the `datashare` binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match run(&cli, &mut out) {
        Ok(status) => status.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    let _ = out.flush();
    ExitCode::from(code)
}
