//! `medoidnet` command-line interface.
//!
//! Exit codes: 0 success, 1 computation-domain error, 2 I/O or format error.

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod dataset;
mod spaces;

/// An unreadable or malformed input file.
#[derive(Debug)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FormatError {}

#[derive(Parser, Debug)]
#[command(name = "medoidnet", version, about = "Medoid-net learners for metric-valued regression")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Train a model on a dataset and write it as JSON.
    Train,
    /// Predict labels for the instances of a dataset.
    Predict,
    /// Run a convergence experiment on a synthetic distribution.
    Experiment,
    /// Evaluate a generalization bound.
    Bound,
    /// Write the γ-net and Voronoi cells of a dataset's instances as CSV.
    NetDump,
    /// Check the metric axioms of a space on a probe set.
    ValidateSpace,
}

/// Every option may also be given as `key=value` in the `--config` file;
/// command-line flags take precedence.
#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Flat `key=value` configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Dataset CSV (`x_*` or `x_id` columns, `y` column).
    #[arg(long, global = true)]
    pub dataset: Option<PathBuf>,
    /// Synthetic distribution id.
    #[arg(long, global = true)]
    pub distribution: Option<String>,
    /// Learner: fin | countable | unbounded | separable (experiments also
    /// accept knn1 | knn_sqrt; comma-separate several).
    #[arg(long, global = true)]
    pub learner: Option<String>,
    /// Confidence parameter δ.
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// Side-information bits b.
    #[arg(long, global = true)]
    pub bits: Option<u32>,
    /// Truncation radius for the unbounded learners.
    #[arg(long, global = true)]
    pub ltrunc: Option<f64>,
    /// Label ε-net resolution.
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    /// Random seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "MEDOIDNET_THREADS")]
    pub threads: Option<usize>,
    /// Sample sizes, comma-separated and ascending.
    #[arg(long, global = true)]
    pub n_grid: Option<String>,
    /// Trials per sample size.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// q | hoeffding | bernstein | sample-dependent | final
    #[arg(long, global = true)]
    pub bound_mode: Option<String>,
    /// Sample size for `bound`.
    #[arg(long, global = true)]
    pub n: Option<u64>,
    /// Empirical risk α for `bound`.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Compression size k for `bound`.
    #[arg(long, global = true)]
    pub k: Option<u64>,
    /// Loss range L for `bound`.
    #[arg(long, global = true)]
    pub l: Option<f64>,
    /// Instance space id (default inferred from the dataset).
    #[arg(long, global = true)]
    pub instance_space: Option<String>,
    /// Label space id (default inferred from the dataset).
    #[arg(long, global = true)]
    pub label_space: Option<String>,
    /// Model file for `predict`.
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,
    /// Net scale for `net-dump` (`inf` allowed).
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// Space id for `validate-space`.
    #[arg(long, global = true)]
    pub space: Option<String>,
    /// Distribution parameter `key=value` (repeatable).
    #[arg(long = "param", global = true)]
    pub params: Vec<String>,
    /// Monte Carlo draws per risk estimate in experiments.
    #[arg(long, global = true)]
    pub mc_draws: Option<usize>,
    /// Also write experiment rows as JSON lines to this path.
    #[arg(long, global = true)]
    pub jsonl: Option<PathBuf>,
    /// Record wall-clock time per experiment cell.
    #[arg(long, global = true)]
    pub timing: bool,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<FormatError>()
            || cause.is::<std::io::Error>()
            || cause.is::<csv::Error>()
            || cause.is::<serde_json::Error>()
        {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<medoidnet::Error>() {
            return if e.is_io_or_format() { 2 } else { 1 };
        }
    }
    1
}

fn run(args: Vec<OsString>) -> Result<()> {
    let args = config::merge(args)?;
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    configure_threads(cli.opts.threads)?;
    commands::dispatch(&cli.command, &cli.opts)
}

#[cfg(feature = "parallel")]
fn configure_threads(threads: Option<usize>) -> Result<()> {
    if let Some(t) = threads {
        use anyhow::Context;
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(_threads: Option<usize>) -> Result<()> {
    Ok(())
}

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
