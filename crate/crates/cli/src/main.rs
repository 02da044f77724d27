//! `contagion` — command-line pipelines over the core library.
//!
//! Every subcommand writes its artifacts plus a `run-manifest.json` into the
//! output directory; given the same arguments and seed, outputs are byte
//! identical regardless of thread count.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "contagion", version, about = "Tie strength, emotion diffusion and burst kinetics on social graphs")]
pub struct Cli {
    /// Output directory for artifacts and the run manifest
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    /// JSON file supplying parameter defaults by flag name (flags win)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Cap the worker pool for replicate-parallel stages
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Load an edge-list TSV (and optionally a retweet CSV), validate, and
    /// write the graph cache
    Ingest(IngestArgs),
    /// Generate a stochastic-block-model graph and write the graph cache
    Synth(SynthArgs),
    /// Per-edge tie strengths and the anger/joy comparison
    TieStrength(TieStrengthArgs),
    /// Run seeded diffusion simulations; emit traces, per-step counts and
    /// optional snapshots
    Simulate(SimulateArgs),
    /// Awakening/peak markers for a timestamp CSV or a trace JSON
    Burst(BurstArgs),
    /// Slope/coverage sweep over a (gamma, alpha) grid
    Sweep(SweepArgs),
    /// Divergence-minimizing fit of alpha against an empirical sample
    Fit(FitArgs),
    /// Analyze pre-segmented burst events and compare dominance groups
    Events(EventsArgs),
    /// Divergences and Welch's t-test between two sample CSVs
    Stats(StatsArgs),
}

#[derive(Args, Debug)]
pub struct IngestArgs {
    /// Edge list: `follower<TAB>followee` per line, `#` comments
    #[arg(long)]
    pub edges: PathBuf,
    /// Optional retweet log: `timestamp,retweeter,author,emotion`
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Also export `subset.dot` for these comma-separated node ids
    #[arg(long)]
    pub dot_nodes: Option<String>,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Comma-separated block sizes, e.g. `500,500`
    #[arg(long)]
    pub blocks: Option<String>,
    #[arg(long)]
    pub p_in: Option<f64>,
    #[arg(long)]
    pub p_out: Option<f64>,
    #[arg(long)]
    pub rng_seed: Option<u64>,
    /// Also export `subset.dot` for these comma-separated node ids
    #[arg(long)]
    pub dot_nodes: Option<String>,
}

#[derive(Args, Debug)]
pub struct TieStrengthArgs {
    /// Graph cache JSON or edge-list TSV
    #[arg(long)]
    pub graph: PathBuf,
    /// Retweet log CSV (required for reciprocity/retweets metrics)
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// `common-friends`, `reciprocity` or `retweets`
    #[arg(long)]
    pub metric: Option<String>,
    /// Count only retweets strictly before this instant (epoch seconds or
    /// ISO-8601); required for the retweets metric
    #[arg(long)]
    pub t_cut: Option<String>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub log: Option<PathBuf>,
    #[arg(long)]
    pub metric: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long)]
    pub weight_floor: Option<f64>,
    /// Fix the seed node (external id); omitted = a random node per run
    #[arg(long)]
    pub seed_node: Option<String>,
    #[arg(long)]
    pub rng_seed: Option<u64>,
    /// Also write a DOT snapshot of the first K infected nodes per run
    #[arg(long)]
    pub snapshot_k: Option<usize>,
    /// t_cut for the retweets metric (epoch seconds or ISO-8601)
    #[arg(long)]
    pub t_cut: Option<String>,
}

#[derive(Args, Debug)]
pub struct BurstArgs {
    /// CSV with one timestamp per line (epoch seconds or ISO-8601)
    #[arg(long, conflicts_with = "trace")]
    pub timestamps: Option<PathBuf>,
    /// Trace JSON produced by `simulate`
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Bin width in seconds for timestamp input
    #[arg(long)]
    pub bin_width: Option<i64>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub log: Option<PathBuf>,
    #[arg(long)]
    pub metric: Option<String>,
    /// Grid: `a,b,c` or `start:end:step`
    #[arg(long, allow_hyphen_values = true)]
    pub gammas: Option<String>,
    /// Grid: `a,b,c` or `start:end:step`
    #[arg(long, allow_hyphen_values = true)]
    pub alphas: Option<String>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long)]
    pub weight_floor: Option<f64>,
    #[arg(long)]
    pub rng_seed: Option<u64>,
    #[arg(long)]
    pub t_cut: Option<String>,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub log: Option<PathBuf>,
    #[arg(long)]
    pub metric: Option<String>,
    /// Empirical strength sample CSV, one value per line
    #[arg(long, conflicts_with = "emotion")]
    pub empirical: Option<PathBuf>,
    /// Build the empirical sample from this emotion's retweets in the log
    #[arg(long)]
    pub emotion: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alphas: Option<String>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// `kl`, `wasserstein` or `both`
    #[arg(long)]
    pub divergence: Option<String>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long)]
    pub weight_floor: Option<f64>,
    #[arg(long)]
    pub rng_seed: Option<u64>,
    #[arg(long)]
    pub t_cut: Option<String>,
}

#[derive(Args, Debug)]
pub struct EventsArgs {
    /// CSV with columns `event_id,timestamp,emotion`
    #[arg(long)]
    pub input: PathBuf,
    /// Dominance threshold (strictly-greater share of emotional tweets)
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Curve bin width in seconds
    #[arg(long)]
    pub bin_width: Option<i64>,
    /// Bin all tweets instead of only emotional ones
    #[arg(long)]
    pub all_tweets: bool,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    /// First sample CSV, one value per line
    #[arg(long)]
    pub a: PathBuf,
    /// Second sample CSV, one value per line
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// `divergences`, `welch` or `all`
    #[arg(long)]
    pub what: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    #[cfg(feature = "parallel")]
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: cannot configure {threads} worker thread(s): {e}");
            return ExitCode::from(1);
        }
    }

    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
