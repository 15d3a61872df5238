use std::path::PathBuf;

use alwabp_core::Variability;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "alwabp", version, about = "Worker assignment and line balancing solvers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Random seed for the heuristic and the generator.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Wall-clock limit in seconds.
    #[arg(long, global = true, value_name = "SECONDS", value_parser = positive_seconds)]
    pub time_limit: Option<f64>,

    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,

    /// Include search logs in the report.
    #[arg(short, long, global = true)]
    pub verbose: bool,

    /// Leave out every timing so that reports are reproducible.
    #[arg(long, global = true)]
    pub no_timings: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve to optimality with branch-and-bound.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        heuristic: HeuristicArgs,
        #[command(flatten)]
        caps: CapArgs,
        /// Skip the heuristic incumbent.
        #[arg(long)]
        no_heuristic: bool,
        /// Disable the reduction rules.
        #[arg(long)]
        no_reductions: bool,
    },
    /// Run the interval beam search only.
    Heur {
        file: PathBuf,
        #[command(flatten)]
        heuristic: HeuristicArgs,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Compute every lower bound.
    Bounds {
        file: PathBuf,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Write a MIP model in LP format.
    Export {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModelArg::M3)]
        model: ModelArg,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate an instance from a base line (worker 1 times and precedences).
    Gen {
        base: PathBuf,
        #[arg(long = "var", default_value = "low")]
        variability: Variability,
        #[arg(long = "inf", default_value_t = 0.0)]
        infeasibility: f64,
        #[arg(long)]
        workers: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exhaustive search, for tiny instances.
    Oracle { file: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve { .. } => "solve",
            Command::Heur { .. } => "heur",
            Command::Bounds { .. } => "bounds",
            Command::Export { .. } => "export",
            Command::Gen { .. } => "gen",
            Command::Oracle { .. } => "oracle",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct HeuristicArgs {
    /// Beam width.
    #[arg(long)]
    pub width: Option<usize>,
    /// Children per worker extension.
    #[arg(long)]
    pub factor: Option<usize>,
    /// Fraction of the incumbent that bounds each sweep from below.
    #[arg(long)]
    pub interval: Option<f64>,
    /// Minimum search time in seconds.
    #[arg(long)]
    pub t_min: Option<f64>,
    /// Maximum search time in seconds.
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Non-improving sweeps before stopping.
    #[arg(long)]
    pub repetitions: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CapArgs {
    /// Iterations of the first Lagrangian bound.
    #[arg(long)]
    pub l1_iters: Option<usize>,
    /// Iterations of the second Lagrangian bound.
    #[arg(long)]
    pub l2_iters: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    M2,
    M3,
}

fn positive_seconds(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
        _ => Err(format!("'{s}' is not a non-negative number of seconds")),
    }
}
