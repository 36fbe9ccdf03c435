use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use baccara_cli::{
    cmd_classify, cmd_enumerate, cmd_simulate, cmd_solve, cmd_verify,
    CmdError, Format, Model,
};

/// Exact solver for the matrix game of baccara chemin de fer.
///
/// Models: A1/A2/A3 deal with replacement, B1/B2/B3 from a --decks shoe;
/// 1 = both sides see totals only, 2 = Banker sees his composition,
/// 3 = both sides see their compositions.
#[derive(Parser)]
#[command(name = "baccara", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a model exactly and print mixtures, value, and certificate.
    Solve {
        #[arg(long)]
        model: Model,
        /// Number of decks in the shoe (B models only).
        #[arg(long)]
        decks: Option<u32>,
        #[arg(long, default_value = "markdown")]
        format: Format,
    },
    /// Classify every Banker decision point as draw, stand, or contested.
    Classify {
        #[arg(long)]
        model: Model,
        #[arg(long)]
        decks: Option<u32>,
        #[arg(long, default_value = "markdown")]
        format: Format,
    },
    /// Check a solution's exact optimality certificate (built-in solution
    /// unless a JSON file produced by `solve --format json` is given).
    Verify {
        #[arg(long)]
        model: Model,
        #[arg(long)]
        decks: Option<u32>,
        #[arg(long, default_value = "markdown")]
        format: Format,
        /// Solution document to verify.
        solution_file: Option<PathBuf>,
    },
    /// List the extreme equilibria of the with-replacement models A2/A3.
    Enumerate {
        #[arg(long)]
        model: Model,
        #[arg(long, default_value = "markdown")]
        format: Format,
    },
    /// Monte Carlo coups against the exact expectation.
    Simulate {
        #[arg(long)]
        model: Model,
        #[arg(long)]
        decks: Option<u32>,
        /// Player pure strategy mask 0..=31 (with --table-file only).
        #[arg(long)]
        mask: Option<u8>,
        /// JSON move table for Banker; defaults to simulating the solved
        /// optimal mixtures.
        #[arg(long)]
        table_file: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "markdown")]
        format: Format,
    },
}

fn run(cli: Cli) -> Result<baccara_cli::CmdOutput, CmdError> {
    match cli.command {
        Command::Solve {
            model,
            decks,
            format,
        } => cmd_solve(model, decks, format),
        Command::Classify {
            model,
            decks,
            format,
        } => cmd_classify(model, decks, format),
        Command::Verify {
            model,
            decks,
            format,
            solution_file,
        } => cmd_verify(model, decks, solution_file.as_deref(), format),
        Command::Enumerate { model, format } => cmd_enumerate(model, format),
        Command::Simulate {
            model,
            decks,
            mask,
            table_file,
            trials,
            seed,
            format,
        } => cmd_simulate(
            model,
            decks,
            mask,
            table_file.as_deref(),
            trials,
            seed,
            format,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
