use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use topocluster::{DecoderKind, Frame};

mod commands;
mod manifest;

/// Exit status: 0 success, 1 usage or configuration error, 2 failed
/// invariant check.
#[derive(Debug)]
pub enum Failure {
    Usage(anyhow::Error),
    /// Usage error already reported by the argument parser.
    Reported,
    Invariant(String),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.into())
    }
}

pub type CmdResult<T = ()> = std::result::Result<T, Failure>;

#[derive(Parser, Debug)]
#[command(
    name = "topocluster",
    version,
    about = "Topological error correction on 3D cluster states"
)]
pub struct Cli {
    /// Seed for every random stream [default: 42]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Error vocabulary: `abstract` (Z errors, X correlations) or `lab`
    /// (X errors, Z correlations) [default: abstract]
    #[arg(long, global = true)]
    pub frame: Option<Frame>,
    /// Directory for output files and the run manifest; stdout when absent
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for sweeps and enumeration
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Build a cell complex and write it as JSON
    Build(LatticeArgs),
    /// Reproduce the single-error syndrome table of the eight-qubit complex
    Table1,
    /// Extract the syndrome of an error pattern
    Syndrome {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Comma-separated qubit names or indices
        #[arg(long, default_value = "")]
        errors: String,
    },
    /// Decode an error pattern and report the residual
    Decode {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        decoder: Option<DecoderKind>,
        #[arg(long, default_value = "")]
        errors: String,
    },
    /// Monte Carlo sweep of the logical error rate
    Sweep(SweepArgs),
    /// Exhaustive error-pattern profile
    Profile {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        decoder: Option<DecoderKind>,
        /// Comma-separated qubits to enumerate [default: every face qubit]
        #[arg(long)]
        support: Option<String>,
    },
    /// Witness value and local settings for the eight-photon state
    Witness(WitnessArgs),
    /// Run the invariant suite
    Verify {
        /// Random cases per randomized check
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
    /// Re-run the command recorded in a manifest
    Replay { manifest: PathBuf },
}

#[derive(Args, Debug, Clone)]
pub struct LatticeArgs {
    /// elementary, l8 or cubic
    #[arg(long, default_value = "l8")]
    pub lattice: String,
    /// Cubic dimensions as `lx,ly,t`
    #[arg(long, default_value = "3,3,3")]
    pub dims: String,
    /// Wrap the cubic lattice into a 3-torus
    #[arg(long)]
    pub periodic: bool,
    /// Removed qubits: `face:x,y,z`, `edge:x,y,z` (doubled coordinates) or
    /// `line:x,y,z_from,z_to` (cube coordinates)
    #[arg(long = "defect")]
    pub defects: Vec<String>,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// JSON sweep configuration; other sweep flags are ignored when given
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[arg(long)]
    pub decoder: Option<DecoderKind>,
    /// Comma-separated error rates
    #[arg(long, default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")]
    pub p: String,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// Per-qubit overrides `name=p`
    #[arg(long = "qubit-p")]
    pub qubit_p: Vec<String>,
    /// Add exact Clopper-Pearson interval columns
    #[arg(long)]
    pub exact_ci: bool,
    /// Restrict noise to face qubits
    #[arg(long)]
    pub faces_only: bool,
    /// Also write the closed-form curves on a fine grid
    #[arg(long)]
    pub plot_data: bool,
}

#[derive(Args, Debug, Clone)]
pub struct WitnessArgs {
    /// Flip probability on every photon
    #[arg(long, default_value_t = 0.0)]
    pub p: f64,
    /// Per-photon overrides `name=p`
    #[arg(long = "qubit-p")]
    pub qubit_p: Vec<String>,
}

fn run(argv: Vec<String>) -> CmdResult {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            e.print()?;
            if code == 0 {
                return Ok(());
            }
            return Err(Failure::Reported);
        }
    };
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    commands::dispatch(&cli, &argv[1..])
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Reported) => ExitCode::from(1),
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant violated: {msg}");
            ExitCode::from(2)
        }
    }
}
