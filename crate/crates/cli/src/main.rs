mod commands;
mod config;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::CliError;

/// Spectra of O(D) anharmonic oscillators at negative even dimension, the
/// exact D-parametric perturbation series and its root asymptotics.
#[derive(Parser, Debug)]
#[command(name = "negdim", version, about)]
struct Cli {
    /// Leave the timestamp line out of output headers.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// Progress and diagnostics on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectral polynomial R_2j(E, g) as polynomial JSON.
    Spectral(SpectralArgs),
    /// Exact perturbation coefficients E^(k)(D), one polynomial JSON per line.
    Perturb(PerturbArgs),
    /// Roots of P_k(D) = E^(k)(D) / (D(D+2)) with labels and residuals.
    Roots(RootsArgs),
    /// Exact vs predicted root offsets near D = -2M.
    Asym(AsymArgs),
    /// Level trajectories in the effective dimension from Hill determinants.
    Hill(HillArgs),
    /// Run verification suites and print a pass/fail matrix.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Form {
    /// det[J+ + V(2J-) - E] as constructed.
    Det,
    /// The normalized R~ form.
    Tilde,
    /// Leading coefficient scaled to one.
    Monic,
}

#[derive(Args, Debug)]
pub struct SpectralArgs {
    #[arg(long = "two-j")]
    pub two_j: u32,
    /// Builtin name (harmonic, quartic, sextic) or potential JSON file.
    #[arg(long, default_value = "quartic")]
    pub potential: String,
    /// Symbolic w_1..w_max(2j,1) instead of a numeric potential.
    #[arg(long)]
    pub generic_w: bool,
    #[arg(long, default_value = "spin-det")]
    pub construction: String,
    #[arg(long, value_enum, default_value = "det")]
    pub form: Form,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PerturbArgs {
    /// Highest order K; orders 0..=K are written.
    #[arg(long)]
    pub orders: usize,
    #[arg(long, default_value = "quartic")]
    pub potential: String,
    /// Evaluate at a rational dimension instead, e.g. `D=-4`.
    #[arg(long)]
    pub specialize: Option<String>,
    /// Write P_k = E^(k)/(D(D+2)) for k >= 1 instead of E^(k).
    #[arg(long)]
    pub factored: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RootsArgs {
    /// `A..B` or a single upper order.
    #[arg(long, default_value = "5..60")]
    pub orders: String,
    /// `auto` (precision ladder) or fixed bits.
    #[arg(long, default_value = "auto")]
    pub bits: String,
    #[arg(long, default_value = "quartic")]
    pub potential: String,
    /// Cluster window around -2M.
    #[arg(long, default_value_t = negdim_core::roots::DEFAULT_WINDOW)]
    pub window: f64,
    #[arg(long, default_value = "aberth")]
    pub solver: String,
    /// Emit a gnuplot data + script pair for this single order.
    #[arg(long)]
    pub scatter: Option<usize>,
    /// CSV path, or the file prefix with --scatter.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AsymArgs {
    #[arg(long = "M")]
    pub m: u32,
    /// `A..B` or a single upper order (from 5).
    #[arg(long, default_value = "60")]
    pub orders: String,
    #[arg(long, default_value = "quartic")]
    pub potential: String,
    /// Precision of the singularity data.
    #[arg(long, default_value_t = 256)]
    pub bits: u32,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct HillArgs {
    /// `from:to:step` in the effective dimension.
    #[arg(long = "Dcal-range", allow_hyphen_values = true)]
    pub dcal_range: String,
    #[arg(long, default_value = "1")]
    pub g: String,
    #[arg(long, default_value_t = 6)]
    pub levels: usize,
    #[arg(long, default_value = "quartic")]
    pub potential: String,
    #[arg(long, default_value_t = negdim_core::hill::DEFAULT_TRUNCATION)]
    pub truncation: usize,
    #[arg(long, default_value_t = negdim_core::hill::DEFAULT_DELTA_N)]
    pub delta_n: usize,
    #[arg(long, default_value_t = negdim_core::hill::DEFAULT_HILL_BITS)]
    pub bits: u32,
    /// Gaussian factor; chosen from the potential when absent.
    #[arg(long)]
    pub alpha: Option<String>,
    /// CSV path; a gnuplot script is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suites to run (see --list).
    pub suites: Vec<String>,
    /// Every light suite.
    #[arg(long)]
    pub all: bool,
    /// With --all, include the suites that need the full root sweep.
    #[arg(long)]
    pub heavy: bool,
    #[arg(long)]
    pub list: bool,
    #[arg(long = "max-M")]
    pub max_m: Option<u32>,
    #[arg(long = "tensor-M")]
    pub tensor_m: Option<u32>,
    #[arg(long = "max-two-j")]
    pub max_two_j: Option<u32>,
    #[arg(long)]
    pub series_k: Option<usize>,
    #[arg(long)]
    pub sweep_k: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("negdim: config: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let global = commands::Global { timestamp: !cli.no_timestamp, verbosity: cli.verbose };
    let result = match cli.command {
        Command::Spectral(a) => commands::spectral(&global, a),
        Command::Perturb(a) => commands::perturb(&global, a),
        Command::Roots(a) => commands::roots(&global, a),
        Command::Asym(a) => commands::asym(&global, a),
        Command::Hill(a) => commands::hill(&global, a),
        Command::Verify(a) => commands::verify(&global, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::Verification(_)) || cli.verbose > 0 {
                eprintln!("negdim: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
