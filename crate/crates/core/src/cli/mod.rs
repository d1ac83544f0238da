//! The `blowup` command line.
//!
//! ```text
//! blowup norms  --p 3 --q1 0.5 --oracle
//! blowup roots  --scenario cor2 --p 3 --lambda 60
//! blowup sweep  --scenario cor1 --lambda-min 1 --lambda-max 1e4 --lambda-n 41
//! blowup eval   --A 1 --B 1 --lambda 2 --grid-n 101
//! blowup verify --asymptotics
//! blowup exp    --A 1+t --B 2+t --lambda 3
//! ```
//!
//! Exit status: 0 on success (zero roots included), 1 when a verification
//! check fails, 2 on usage or configuration errors.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;

use clap::{Parser, Subcommand};

use crate::bifurcation::BifurcationError;
use crate::expcase::ExpError;
use crate::norms::NormError;
use crate::timemap::TimemapError;
use crate::verify::VerifyError;
pub use config::{lambda_grid, ConfigArgs, Format, RunConfig, Spacing};

/// Environment variable capping sweep parallelism; `0` or unset means one
/// thread per core.
pub const THREADS_ENV: &str = "BLOWUP_THREADS";

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or problem data: exit 2.
    Usage(String),
    /// The verification suite could not complete: exit 1.
    Failed(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

macro_rules! usage_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Usage(e.to_string())
            }
        }
    )*};
}
usage_from!(BifurcationError, NormError, TimemapError, ExpError);

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        CliError::Failed(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "blowup", version, about = "Solution counts and bifurcation sweeps for nonlocal blow-up problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Profile constants and the four norms.
    Norms(ConfigArgs),
    /// All solutions at one lambda.
    Roots(ConfigArgs),
    /// Root counts over a lambda grid, with located thresholds.
    Sweep(ConfigArgs),
    /// Sample one solution on an x-grid.
    Eval(ConfigArgs),
    /// Run the oracle suite.
    Verify(ConfigArgs),
    /// Solve the exponential problem.
    Exp(ConfigArgs),
}

/// Reads `BLOWUP_THREADS`.
pub fn threads_from_env() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if v.trim().is_empty() => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("{THREADS_ENV} must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(0),
    }
}

fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Norms(a) => commands::norms(&a.resolve()?).map(|_| 0),
        Command::Roots(a) => commands::roots(&a.resolve()?).map(|_| 0),
        Command::Sweep(a) => {
            let cfg = a.resolve()?;
            commands::sweep(&cfg, threads_from_env()?).map(|_| 0)
        }
        Command::Eval(a) => commands::eval(&a.resolve()?).map(|_| 0),
        Command::Verify(a) => commands::verify(&a.resolve()?).map(|ok| if ok { 0 } else { 1 }),
        Command::Exp(a) => commands::exp(&a.resolve()?).map(|_| 0),
    }
}

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
