mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

/// Seed used when neither `--seed` nor `QFTQKD_SEED` is given.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Parser)]
#[command(name = "qftqkd", version, about = "QFT-based QKD simulation and eavesdropper-detection analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic detection probability for a scheme and touch set.
    Analyze(AnalyzeArgs),
    /// Monte Carlo detection rate of a protocol run.
    Simulate(SimulateArgs),
    /// Many-copies attack statistics.
    Attack(AttackArgs),
    /// Detection curves over key size for the interleaved schemes.
    Figures(FiguresArgs),
    /// Analytic engine against simulation, one row per scheme and size.
    Crossvalidate(CrossvalidateArgs),
}

#[derive(Args, Clone)]
#[group(multiple = false)]
pub struct SchemeArgs {
    /// Built-in scheme kind.
    #[arg(long, value_name = "KIND")]
    pub builtin: Option<String>,
    /// Scheme description in JSON.
    #[arg(long, value_name = "PATH")]
    pub scheme_file: Option<PathBuf>,
}

#[derive(Args, Clone)]
pub struct CommonArgs {
    #[arg(long, env = "QFTQKD_SEED")]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout if absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

impl CommonArgs {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or_else(|| {
            eprintln!("seed: {DEFAULT_SEED} (default)");
            DEFAULT_SEED
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    /// Enumerate for small compartments, factorized otherwise.
    Auto,
    Enumerate,
    Factorized,
}

#[derive(Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, default_value_t = 4)]
    pub key_qubits: usize,
    /// none | full | keys | subset=i,j,... | JSON descriptor
    #[arg(long, default_value = "keys")]
    pub eve: String,
    /// mean | min | single
    #[arg(long, default_value = "mean")]
    pub stat: String,
    /// Key bits for the single statistic, e.g. 0110.
    #[arg(long)]
    pub key: Option<String>,
    /// Sample this many keys instead of enumerating all of them.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, value_enum, default_value_t = Route::Auto)]
    pub method: Route,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, default_value_t = 4)]
    pub key_qubits: usize,
    /// bb84 | two_pass | three_pass
    #[arg(long, default_value = "two_pass")]
    pub protocol: String,
    #[arg(long, default_value = "keys")]
    pub eve: String,
    /// Send this key in every trial instead of a random one.
    #[arg(long)]
    pub key: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub mismatch_limit: usize,
    /// dense | equatorial | auto
    #[arg(long, default_value = "auto")]
    pub backend: String,
    /// Write every transcript as JSON lines to this file.
    #[arg(long, value_name = "PATH")]
    pub dump_transcripts: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args)]
pub struct AttackArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, default_value_t = 1)]
    pub key_qubits: usize,
    #[arg(long, default_value = "bb84")]
    pub protocol: String,
    #[arg(long, default_value_t = 4)]
    pub copies: usize,
    /// Wire Eve measures; defaults to the first key wire.
    #[arg(long)]
    pub target_wire: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub mismatch_limit: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args)]
pub struct FiguresArgs {
    #[arg(long, default_value_t = 8)]
    pub max_key_qubits: usize,
    #[arg(long, default_value = "keys")]
    pub eve: String,
    /// Monte Carlo trials per point; 0 skips simulation rows.
    #[arg(long, default_value_t = 2_000)]
    pub trials: u64,
    #[arg(long, value_enum, default_value_t = Route::Auto)]
    pub method: Route,
    /// Add rows from the exact joint outcome model where within caps.
    #[arg(long)]
    pub with_exact: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args)]
pub struct CrossvalidateArgs {
    /// Restrict to one scheme; all of qft_random and the interleaved schemes otherwise.
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, default_value_t = 6)]
    pub max_key_qubits: usize,
    #[arg(long, default_value = "keys")]
    pub eve: String,
    /// mean | min; both if absent.
    #[arg(long)]
    pub stat: Option<String>,
    #[arg(long, default_value_t = 20_000)]
    pub trials: u64,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => commands::analyze(&args),
        Command::Simulate(args) => commands::simulate(&args),
        Command::Attack(args) => commands::attack(&args),
        Command::Figures(args) => commands::figures(&args),
        Command::Crossvalidate(args) => commands::crossvalidate(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
