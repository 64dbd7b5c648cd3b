mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::config::ExperimentConfig;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "deltarray", version, about = "Transmission through arrays of delta-function barriers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// JSON experiment description
    #[arg(long)]
    config: PathBuf,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Transmission at one energy: prints `energy_meV,k_per_nm,T,R`
    Transmit {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        energy: f64,
    },
    /// Transmission spectrum as CSV plus a gnuplot script next to it
    Scan {
        #[command(flatten)]
        common: Common,
    },
    /// Perfect-tunnelling energies over the scan range
    Resonances {
        #[command(flatten)]
        common: Common,
    },
    /// Resonance reduction report at one energy
    Reduce {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        energy: f64,
    },
    /// Design an equal-strength pair cell tunnelling at the target energy
    Design {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        target: f64,
        #[arg(long, default_value_t = 0)]
        branch: u32,
    },
}

fn configure_threads() {
    let n = std::env::var("DELTARRAY_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    if n > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn run(cli: Cli) -> Result<Option<String>, CliError> {
    use commands::*;
    let load = |c: &Common| ExperimentConfig::load(&c.config).and_then(|cfg| cfg.build());
    match cli.command {
        Command::Transmit { common, energy } => {
            let exp = load(&common)?;
            let line = transmit(&exp, energy)?;
            match common.out {
                Some(p) => std::fs::write(&p, line)
                    .map(|_| None)
                    .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
                None => Ok(Some(line)),
            }
        }
        Command::Scan { common } => scan(&load(&common)?, out_path(&common.out)),
        Command::Resonances { common } => resonances(&load(&common)?, out_path(&common.out)),
        Command::Reduce { common, energy } => reduce_cmd(&load(&common)?, energy, out_path(&common.out)).map(Some),
        Command::Design { common, target, branch } => {
            design(&load(&common)?, target, branch, out_path(&common.out))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(cli) {
        Ok(text) => {
            if let Some(t) = text {
                let mut stdout = std::io::stdout().lock();
                if stdout.write_all(t.as_bytes()).is_err() {
                    return ExitCode::from(4);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("deltarray: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
