//! `sparse-edge` command-line front end.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub enum CliError {
    /// Exit 2.
    Usage(String),
    /// Exit 1.
    Failure(String),
}

impl From<sparse_edge::Error> for CliError {
    fn from(e: sparse_edge::Error) -> Self {
        use sparse_edge::Error as E;
        match e {
            E::InvalidEnsemble(_)
            | E::DimensionOverflow(..)
            | E::InvalidSparsity(_)
            | E::UnsupportedKind(_)
            | E::InvalidProfile(_)
            | E::InvalidArgument(_)
            | E::Precondition(_)
            | E::RegimeGuard(_)
            | E::Config(_)
            | E::Io(_) => CliError::Usage(e.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Outcome of a subcommand: whether every check it ran passed.
pub type CmdResult = Result<bool, CliError>;

#[derive(Debug, Parser)]
#[command(name = "sparse-edge", version, about = "Edge statistics of sparse random matrices")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// JSON config file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Dotted-path override, e.g. `ensemble.q=15` (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Worker threads.
    #[arg(long, global = true, env = "SPARSE_EDGE_THREADS", value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,
    /// Directory for machine-readable outputs.
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw one matrix and report X and extreme eigenvalues.
    Sample(SampleArgs),
    /// Solve the self-consistent edge L.
    Edge(EdgeArgs),
    /// Free-convolution edge quantities.
    FcEdge(FcEdgeArgs),
    /// Run per-sample diagnostics over several trials.
    Verify(VerifyArgs),
    /// Run a Monte Carlo experiment.
    Experiment(ExperimentArgs),
    /// Fast invariant suite.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Er,
    Signed,
    Goe,
}

#[derive(Debug, Args)]
pub struct EnsembleArgs {
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, conflicts_with = "p")]
    pub q: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long, default_value_t = 0)]
    pub trial: u64,
    /// Gaussian-divisible time: sample H(t) instead of H.
    #[arg(long)]
    pub t: Option<f64>,
    /// Number of extreme eigenvalues to report.
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Also write the full spectrum.
    #[arg(long)]
    pub spectrum: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Bisect,
    Expansion,
}

#[derive(Debug, Args)]
pub struct EdgeArgs {
    #[arg(long)]
    pub q: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub c4: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub c6: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Bisect)]
    pub method: MethodArg,
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FcInputArg {
    Semicircle,
    Analytic,
    Empirical,
}

#[derive(Debug, Args)]
pub struct FcEdgeArgs {
    #[arg(long)]
    pub t: f64,
    #[arg(long, value_enum, default_value_t = FcInputArg::Semicircle)]
    pub input: FcInputArg,
    /// Semicircle variance.
    #[arg(long, default_value_t = 1.0)]
    pub variance: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub c4: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c6: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x: f64,
    /// Ensemble for empirical input; `--q` also sets the analytic sparsity.
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long, default_value_t = 0)]
    pub trial: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckArg {
    LocalLaw,
    Rigidity,
    Location,
    Counting,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long, value_enum, default_value_t = CheckArg::All)]
    pub check: CheckArg,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Required pass rate per check.
    #[arg(long)]
    pub min_pass_rate: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Reuse records already on disk.
    #[arg(long)]
    pub resume: bool,
    /// Suppress progress lines.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

fn run(cli: Cli) -> CmdResult {
    if let Some(n) = cli.global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure {n} threads: {e}")))?;
    }
    let g = &cli.global;
    match &cli.command {
        Command::Sample(a) => commands::sample(g, a),
        Command::Edge(a) => commands::edge(g, a),
        Command::FcEdge(a) => commands::fc_edge(g, a),
        Command::Verify(a) => commands::verify(g, a),
        Command::Experiment(a) => commands::experiment(g, a),
        Command::Selftest(a) => commands::selftest(g, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
