//! `lssd`: command-line front end for the game solvers.

mod commands;
mod errors;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "lssd", version, about = "Exact and numeric values of local state discrimination games")]
struct Cli {
    /// Worker threads for enumeration and restarts; LSSD_THREADS takes precedence.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact classical value and an optimal deterministic strategy.
    Pc {
        game: PathBuf,
        /// Largest strategy space to enumerate.
        #[arg(long, default_value_t = lssd_core::classical::DEFAULT_STRATEGY_BUDGET)]
        budget: u128,
    },
    /// Exact no-signaling value and an optimal box.
    Pns {
        game: PathBuf,
        /// Print the full (unpruned) LP instead of solving.
        #[arg(long)]
        dump_lp: bool,
        /// Write the optimal box to this file instead of stdout.
        #[arg(long)]
        box_out: Option<PathBuf>,
    },
    /// Checks that a box file is a valid no-signaling box.
    ValidateBox {
        #[arg(value_name = "BOX")]
        box_file: PathBuf,
        /// Also report the box's winning probability on this game.
        #[arg(long)]
        game: Option<PathBuf>,
    },
    /// Lower bound on the entangled value from optimized qubit strategies.
    PqLower {
        game: PathBuf,
        #[arg(long, default_value_t = 20)]
        seeds: usize,
        /// Objective evaluations per local search.
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Evaluate the reference strategy instead of optimizing.
        #[arg(long)]
        paper_strategy: bool,
        /// Write the strategy JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact check of the sum-of-squares upper bound, as JSON.
    VerifySos {
        /// Grid resolution for the floating-point sweep.
        #[arg(long, default_value_t = 201)]
        grid: usize,
    },
    /// Classical, qubit and no-signaling values of the three-outcome game.
    Theorem1 {
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 20)]
        seeds: usize,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Noisy-bit game at one noise level.
    Example1 {
        /// `num/den`, or `threshold` for 1 - 1/sqrt(2) rounded to --denominator.
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 1_000_000)]
        denominator: i64,
    },
    /// Two independent copies of the noisy-bit game near the threshold.
    Example1Product {
        #[arg(long, default_value_t = 1_000_000)]
        denominator: i64,
    },
    /// See-saw on the qutrit example state.
    Example2 {
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 60)]
        iters: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Matching numbers of a hypergraph and, with --verify, the game identities.
    Hypergraph {
        file: PathBuf,
        #[arg(long)]
        verify: bool,
    },
    /// Writes a built-in game in the text format.
    WriteGame {
        #[arg(value_enum)]
        name: BuiltinGame,
        /// Noise level for `noisy-bit`.
        #[arg(long, default_value = "1/4")]
        alpha: String,
        /// Output file; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum BuiltinGame {
    Theorem1,
    NoisyBit,
    PointMass,
}

fn configure_threads(flag: Option<usize>) -> anyhow::Result<()> {
    let env = match std::env::var("LSSD_THREADS") {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| anyhow::anyhow!("LSSD_THREADS must be a positive integer"))?),
        Err(_) => None,
    };
    if let Some(n) = env.or(flag).filter(|&n| n > 0) {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads(cli.threads).and_then(|_| commands::run(cli.command));
    match result {
        Ok(commands::Status::Pass) => ExitCode::SUCCESS,
        Ok(commands::Status::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(errors::exit_code(&e))
        }
    }
}
