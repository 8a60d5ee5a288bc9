//! `entshare` command-line front end.
//!
//! Exit codes: 0 success (all verdicts true), 1 a verdict or invariant
//! failed, 2 usage or parameter error.

mod audit;
mod commands;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "entshare", version, about = "Entanglement sharing over noisy qudit channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check completeness and unitality of a channel file
    Validate {
        channel_file: PathBuf,
    },
    /// Entanglement measures of the channel output for one input state
    Measures {
        channel_file: PathBuf,
        /// `phiplus`, `psi_prime`, or a path to a state file
        #[arg(long, default_value = "phiplus")]
        input: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certificate for one point of the Omega channel family
    Certify {
        #[arg(long)]
        d: usize,
        /// Comma-separated x_1,...,x_{d-1}
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certificates over a parameter grid described by a sweep file
    Sweep {
        spec_file: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Check channel invariants on randomly sampled channels
    Audit {
        #[arg(long)]
        d: usize,
        /// Number of channels to sample
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A command failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn violated(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<entshare::Error> for Failure {
    fn from(err: entshare::Error) -> Self {
        match err {
            entshare::Error::NotTracePreserving { .. } => Failure::violated(err.to_string()),
            other => Failure::usage(other.to_string()),
        }
    }
}

/// Verdict of a command that ran to completion.
pub enum Verdict {
    Pass,
    Fail,
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("TOOLKIT_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .map_err(|_| Failure::usage(format!("TOOLKIT_THREADS must be an integer, got {value:?}")))?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Verdict, Failure> {
    configure_threads()?;
    match cli.command {
        Command::Validate { channel_file } => commands::validate(&channel_file),
        Command::Measures {
            channel_file,
            input,
            seed,
            restarts,
            out,
        } => commands::measures(&channel_file, &input, seed, restarts, out.as_deref()),
        Command::Certify {
            d,
            x,
            seed,
            restarts,
            out,
        } => commands::certify(d, &x, seed, restarts, out.as_deref()),
        Command::Sweep {
            spec_file,
            seed,
            restarts,
            out,
            format,
        } => sweep::run(&spec_file, seed, restarts, out, format),
        Command::Audit {
            d,
            n,
            seed,
            restarts,
            out,
        } => audit::run(d, n, seed, restarts, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
