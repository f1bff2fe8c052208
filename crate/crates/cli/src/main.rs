//! `qbattery`: data generation for quantum-battery charging experiments.
//!
//! Exit codes: 0 success, 2 invalid input, 3 optimizer missed the fidelity
//! target (best-so-far results are still written), 1 I/O failure.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "qbattery", version, about = "Quantum battery charging experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Directory receiving the output files (created if missing).
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Format of tabular outputs; summaries are always JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Read and write angles in radians instead of units of π.
    #[arg(long, global = true)]
    radians: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Power-optimal single-qubit protocol and the objective curve F(T).
    Qubit(QubitArgs),
    /// Parallel versus global charging of an N-qubit array.
    Array(ArrayArgs),
    /// Numerical minimization of the full-charging time.
    Optimize(OptimizeArgs),
    /// Entanglement entropy of a bipartition along e^{-iHt}|0…0⟩.
    Entropy(EntropyArgs),
    /// Speed-limit bounds for a Hamiltonian and a pair of states.
    Bounds(BoundsArgs),
}

#[derive(Args, Debug)]
pub struct QubitArgs {
    /// Initial polar angle, measured from the passive pole.
    #[arg(long, default_value_t = 0.0)]
    pub theta0: f64,
    /// Bloch radius.
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// Exponent of the objective ⟨W⟩/T^α.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Spectral-gap budget of the drive.
    #[arg(long, default_value_t = 1.0)]
    pub emax: f64,
    /// Rows of the objective curve over T ∈ (0, 2π/emax].
    #[arg(long, default_value_t = 512)]
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Parallel,
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PropagationArg {
    /// Drive alone.
    Bare,
    /// Drive plus the bare Hamiltonian.
    Total,
    /// Drive plus the bare Hamiltonian with the detuning compensated.
    Compensated,
}

#[derive(Args, Debug)]
pub struct ArrayArgs {
    #[arg(long)]
    pub n: usize,
    /// Per-qubit drive budget.
    #[arg(long, default_value_t = 1.0)]
    pub emax: f64,
    /// Level spacing of each qubit.
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Global)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = PropagationArg::Bare)]
    pub propagation: PropagationArg,
    /// Start from a product of thermal qubits at this inverse temperature.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Trajectory samples for the path lengths.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    /// Qubit count, or an inclusive range such as `1..4`.
    #[arg(long)]
    pub n: String,
    /// Per-qubit budget; the spectral window is [0, n·emax].
    #[arg(long, default_value_t = 1.0)]
    pub emax: f64,
    #[arg(long, default_value_t = 0.999)]
    pub fidelity: f64,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Simplex iterations per restart (default grows with n).
    #[arg(long)]
    pub max_iters: Option<usize>,
}

#[derive(Args, Debug)]
#[group(id = "source", required = true, multiple = false, args = ["hamiltonian", "oracle"])]
pub struct HamiltonianSource {
    /// Hamiltonian JSON file.
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    /// Use the analytic optimum Λ|+⟩⟨+| with this Λ instead of a file (needs --n).
    #[arg(long)]
    pub oracle: Option<f64>,
}

#[derive(Args, Debug)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub source: HamiltonianSource,
    /// Qubit count; inferred from the Hamiltonian when omitted.
    #[arg(long)]
    pub n: Option<usize>,
    /// Sites kept in the reduced state, comma separated (site 0 first).
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    pub keep: Vec<usize>,
    /// Number of evenly spaced times; 1 gives t = 0 only.
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    /// End of the time window; defaults to the charging time.
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Fidelity used to locate the default end time.
    #[arg(long, default_value_t = 0.999)]
    pub fidelity: f64,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub source: HamiltonianSource,
    #[arg(long)]
    pub n: Option<usize>,
    /// Initial state: bit string (e.g. `0000`) or state JSON file.
    #[arg(long)]
    pub initial: String,
    /// Target state: bit string or state JSON file.
    #[arg(long)]
    pub target: String,
    /// Fidelity counted as arrival.
    #[arg(long, default_value_t = 1.0 - 1e-9)]
    pub fidelity: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = commands::configure_threads() {
        return report(e);
    }
    let ctx = commands::Context {
        out: cli.out,
        format: cli.format,
        radians: cli.radians,
    };
    let result = match cli.command {
        Command::Qubit(a) => commands::qubit(&ctx, &a),
        Command::Array(a) => commands::array(&ctx, &a),
        Command::Optimize(a) => commands::optimize(&ctx, &a),
        Command::Entropy(a) => commands::entropy(&ctx, &a),
        Command::Bounds(a) => commands::bounds(&ctx, &a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(e),
    }
}

fn report(e: commands::CliError) -> ExitCode {
    eprintln!("qbattery: {e}");
    ExitCode::from(e.exit_code())
}
