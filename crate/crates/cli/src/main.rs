//! `fpairs`: build vanishing Fourier pairs, overlay them, check the results,
//! and export atom lists.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or input error,
//! 3 resource guard, 4 window too small for a pairing verdict.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fourier_pairs::measure::Window;
use fourier_pairs::pair::MAX_PAIR_M;
use fourier_pairs::symbolic::DEFAULT_PRECISION_BITS;
use fourier_pairs::Error;

#[derive(Debug, Parser)]
#[command(
    name = "fpairs",
    version,
    about = "Build and check discrete Fourier pairs that vanish near the origin"
)]
pub struct Cli {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,

    /// Output file, or directory for commands that write two dumps.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Fractional bits used when evaluating positions and phases.
    #[arg(
        long,
        global = true,
        default_value_t = DEFAULT_PRECISION_BITS,
        value_parser = clap::value_parser!(u32).range(100..=4096)
    )]
    pub precision: u32,

    #[command(subcommand)]
    pub command: Command,
}

fn parse_window(s: &str) -> Result<Window, String> {
    Window::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for a signal on Z_N, N = 100·M², vanishing with its DFT on |n| <= N/10.
    Solve {
        #[arg(long = "M", value_parser = clap::value_parser!(u32).range(1..=MAX_PAIR_M as i64))]
        m: u32,
    },
    /// Build the pair (μ, μ̂) for M and dump both on a window.
    Pair {
        #[arg(long = "M", value_parser = clap::value_parser!(u32).range(1..=MAX_PAIR_M as i64))]
        m: u32,
        /// Window `a:b` with exact decimal or p/q endpoints.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: Window,
    },
    /// Overlay classes 1..=n_max (M_n = 2^n) on a window.
    Nu {
        #[arg(long = "n-max", value_parser = clap::value_parser!(u32).range(1..=30))]
        n_max: u32,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: Window,
    },
    /// Pair a measure with its transform against a batch of Gaussians.
    Verify {
        #[arg(value_enum)]
        target: Target,
        /// Number of random Gaussians (ignored with --fixtures).
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Seed for the ChaCha8 generator drawing Gaussians.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "M", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=MAX_PAIR_M as i64))]
        m: u32,
        #[arg(long = "n-max", default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=30))]
        n_max: u32,
        /// Defaults to -12:12 for psf and pair, -40:40 for nu.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: Option<Window>,
        /// JSON list of {center, frequency, width} to use instead of random draws.
        #[arg(long, value_name = "FILE")]
        fixtures: Option<PathBuf>,
    },
    /// Convert an atom dump to CSV, or re-emit it as JSON.
    Export {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Psf,
    Pair,
    Nu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::TooManyAtoms { .. }) => 3,
        Some(Error::WindowTooSmall { .. }) => 4,
        Some(
            Error::Parse(_)
            | Error::InvalidWindow { .. }
            | Error::InvalidParameter(_)
            | Error::NotRepresentable(_),
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
