//! `sl2ly`: batch front end for the characteristic-exponent routes.

mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "sl2ly",
    version,
    about = "Lyapunov exponent and rotation number of random SL(2,R) products"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Model configuration (JSON); `-` reads standard input.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub route: Option<RouteArg>,
    /// Order of the weak-disorder series.
    #[arg(long, global = true, default_value_t = 4, value_parser = parse_order)]
    pub order: u32,
    /// Sweep axis for `scan`, PARAM=START:STOP:N.
    #[arg(long, global = true, value_name = "PARAM=START:STOP:N")]
    pub sweep: Option<String>,
    /// Write output here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 16)]
    pub replicas: usize,
    /// Steps per replica for `mc` and `sde`.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub steps: u64,
    /// Per-step parameter scale (products) or time step (SDE).
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub step_scale: f64,
    /// Base resolution of the Fokker–Planck grid.
    #[arg(long, global = true, default_value_t = 4096)]
    pub grid: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Ω from the closed form (or the route given by --route).
    Omega,
    /// Zero pattern of Q and the special-function family.
    Classify,
    /// Weak-disorder series up to --order.
    Expand,
    /// Monte Carlo product of matrices.
    Mc,
    /// Monte Carlo integration of the Riccati SDE.
    Sde,
    /// Stationary Fokker–Planck density.
    Fp,
    /// Every applicable route on one model, with pairwise differences.
    Validate,
    /// One route along a sweep axis.
    Scan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Closed,
    Fp,
    Mc,
    Sde,
    Expand,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn parse_order(s: &str) -> Result<u32, String> {
    match s {
        "0" => Ok(0),
        "2" => Ok(2),
        "4" => Ok(4),
        _ => Err("order must be 0, 2 or 4".into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sl2ly: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
