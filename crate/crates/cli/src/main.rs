mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "cext", version, about = "Commutators, central extensions and H² of finite algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Append wall-clock timings to the report.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Limits {
    /// Maximum number of elements in any closure.
    #[arg(long, default_value_t = 1 << 22)]
    pub budget: usize,
    /// Maximum number of enumerated objects.
    #[arg(long, default_value_t = 1 << 16)]
    pub limit: usize,
}

#[derive(Args, Debug)]
pub struct PresentationArgs {
    /// Variety file.
    #[arg(long)]
    pub variety: PathBuf,
    /// Algebra generating the variety as HSP(generator).
    #[arg(long)]
    pub generator: PathBuf,
    /// The presented algebra Q.
    #[arg(long)]
    pub target: PathBuf,
    /// Number of free generators.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Images of the generators in Q, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub images: Vec<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse an algebra and optionally check it against a variety.
    Validate {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        variety: Option<PathBuf>,
    },
    /// List the congruence lattice.
    Con {
        #[arg(long)]
        algebra: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
    /// Term-condition commutator of two congruences.
    Comm {
        #[arg(long)]
        algebra: PathBuf,
        /// `full`, `zero` or blocks such as `0,2|1,3`.
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        /// Print every round of the recursion.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        limits: Limits,
    },
    /// Center of an algebra.
    Center {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        variety: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
    /// Kernel algebra of a central congruence.
    Kernel {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        variety: PathBuf,
        /// Write the kernel algebra to this file.
        #[arg(long)]
        write: Option<PathBuf>,
        #[command(flatten)]
        limits: Limits,
    },
    /// Basic construction B ⊗^T Q from a cocycle file.
    Extend {
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        cocycle: PathBuf,
        #[arg(long)]
        variety: PathBuf,
        /// Write the extension algebra to this file.
        #[arg(long)]
        write: Option<PathBuf>,
    },
    /// Second cohomology H²(Q,B).
    H2 {
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        variety: PathBuf,
        /// Write one representative cocycle per class into this directory.
        #[arg(long)]
        reps: Option<PathBuf>,
        #[command(flatten)]
        limits: Limits,
    },
    /// Five-term sequence for A → A/α with coefficients E.
    Hs {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        e: PathBuf,
        #[arg(long)]
        variety: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
    /// Schur multiplier from a free presentation.
    Schur {
        #[command(flatten)]
        presentation: PresentationArgs,
        #[command(flatten)]
        limits: Limits,
    },
    /// Cover built from a free presentation.
    Cover {
        #[command(flatten)]
        presentation: PresentationArgs,
        #[command(flatten)]
        limits: Limits,
    },
    /// Run a named reproduction check, or `all`.
    Repro {
        name: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = cext::repro::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let reports = commands::dispatch(cli.command)?;
    let text: String = reports.iter().map(|r| r.render(cli.timings)).collect();
    print!("{text}");
    if let Some(path) = cli.out {
        std::fs::write(&path, text).map_err(|source| CliError::Write { path, source })?;
    }
    Ok(())
}
