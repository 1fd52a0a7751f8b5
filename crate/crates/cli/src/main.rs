//! `cvqfl`: encode matrices, run the optical QFT, the filtering and heat
//! experiments, compile interferometers to meshes and print gate counts.
//!
//! Exit codes: 0 success, 1 an invariant or tolerance check failed, 2 bad
//! input (unreadable files, malformed CSV/JSON, invalid sizes or parameters).

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "cvqfl",
    version,
    about = "Continuous-variable quantum Fourier layer simulator"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Seed for generated matrices and noise.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Encoding scale factor (default: chosen from the largest singular value).
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "cvqfl-out")]
    pub out: PathBuf,
    /// Grid or matrix size (square).
    #[arg(long, global = true)]
    pub size: Option<usize>,
    /// JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override the pass/fail tolerance of the command's main check.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Encode a matrix and report round-trip error, entanglement and gate counts.
    Encode {
        /// Matrix CSV; without it a seeded random `size x size` matrix is used.
        matrix: Option<PathBuf>,
    },
    /// Apply the 2D QFT and write the spectrum read from the covariance.
    Qft { matrix: Option<PathBuf> },
    /// Low-pass denoising experiment.
    Filter {
        /// Also write 8-bit PGM images of each field.
        #[arg(long)]
        pgm: bool,
    },
    /// Heat-equation experiment.
    Heat {
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        pgm: bool,
    },
    /// Decompose a unitary into a rectangular beam-splitter mesh.
    Compile {
        /// Complex CSV (`a+bi` cells); alternatively use `--dft N`.
        unitary: Option<PathBuf>,
        /// Compile the unitary DFT matrix of this size.
        #[arg(long, conflicts_with = "unitary")]
        dft: Option<usize>,
    },
    /// Gate and depth counts for the QFT and encoding circuits.
    Report,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
