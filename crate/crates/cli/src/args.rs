use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fairkm_core::{Heuristic, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "fairkm", version, about = "K-means clustering with fairness post-processing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cluster one dataset and report baseline and adjusted metrics.
    Run(RunArgs),
    /// Repeat the Gini adjustment for several neighbourhood sizes.
    Sweep(SweepArgs),
    /// Run every dataset in a manifest and tabulate F and kappa per method.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HeuristicChoice {
    NearForeign,
    Gini,
    None,
    Both,
}

impl HeuristicChoice {
    pub fn name(self) -> &'static str {
        match self {
            HeuristicChoice::NearForeign => "near_foreign",
            HeuristicChoice::Gini => "gini",
            HeuristicChoice::None => "none",
            HeuristicChoice::Both => "both",
        }
    }

    /// Heuristics to run, in report order.
    pub fn expand(self) -> Vec<Heuristic> {
        match self {
            HeuristicChoice::NearForeign => vec![Heuristic::NearForeign],
            HeuristicChoice::Gini => vec![Heuristic::Gini],
            HeuristicChoice::None => vec![],
            HeuristicChoice::Both => vec![Heuristic::NearForeign, Heuristic::Gini],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// CSV file with a header row.
    #[arg(long)]
    pub input: PathBuf,
    /// Column holding the sensitive attribute.
    #[arg(long)]
    pub sensitive_col: String,
    /// Column holding point identifiers; excluded from the features.
    #[arg(long)]
    pub id_col: Option<String>,
    /// Feature column to one-hot encode even if it looks numeric. Repeatable.
    #[arg(long = "categorical")]
    pub categorical: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct TuningArgs {
    /// Neighbourhood size for the Gini heuristic.
    #[arg(long, default_value_t = 10)]
    pub knn_k: usize,
    /// Balance tolerance as a fraction of the population balance.
    #[arg(long, default_value_t = 0.10)]
    pub beta0: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Scale every feature to zero mean and unit variance before clustering.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub standardize: bool,
    /// Switch every ranked candidate in order instead of only improving ones.
    #[arg(long)]
    pub literal_switch: bool,
    #[arg(long, default_value_t = 300)]
    pub max_kmeans_iters: usize,
    /// Cap on adjustment rounds; defaults to K(K-1)/2.
    #[arg(long)]
    pub max_pair_rounds: Option<usize>,
}

impl TuningArgs {
    pub fn config(&self, k: usize) -> RunConfig {
        let mut cfg = RunConfig::new(k)
            .with_knn_k(self.knn_k)
            .with_beta0(self.beta0)
            .with_seed(self.seed)
            .with_standardize(self.standardize)
            .with_literal_switch(self.literal_switch)
            .with_max_kmeans_iters(self.max_kmeans_iters);
        if let Some(r) = self.max_pair_rounds {
            cfg = cfg.with_max_pair_rounds(r);
        }
        cfg
    }

    /// Checks that need no data.
    pub fn check(&self, k: usize) -> Result<(), String> {
        if k < 2 {
            return Err(format!("--k must be at least 2, got {k}"));
        }
        if !(self.beta0 > 0.0 && self.beta0 < 1.0) {
            return Err(format!("--beta0 must lie in (0, 1), got {}", self.beta0));
        }
        if self.knn_k == 0 {
            return Err("--knn-k must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Number of clusters.
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = HeuristicChoice::Both)]
    pub heuristic: HeuristicChoice,
    #[command(flatten)]
    pub tuning: TuningArgs,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Include wall-clock timings. Reports with timings are not reproducible.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub k: usize,
    /// Must include the Gini heuristic.
    #[arg(long, value_enum, default_value_t = HeuristicChoice::Gini)]
    pub heuristic: HeuristicChoice,
    #[command(flatten)]
    pub tuning: TuningArgs,
    /// Comma-separated neighbourhood sizes, e.g. 5,10,15.
    #[arg(long, value_delimiter = ',', required = true)]
    pub knn_sweep: Vec<usize>,
    /// Write the table here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// CSV with columns path,sensitive_col,k and optionally id_col. Paths
    /// are relative to the manifest's directory.
    #[arg(long)]
    pub manifest: PathBuf,
    #[command(flatten)]
    pub tuning: TuningArgs,
    /// Write the table here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}
