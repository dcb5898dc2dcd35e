//! Command-line surface. Every value-bearing flag is optional here because
//! resolution is layered: explicit flags beat `--config` file entries beat
//! built-in defaults (see [`crate::config::Merger`]).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "rebalance",
    version,
    about = "Train text classifiers on class-imbalanced data with hybrid resampling",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic long-tail corpus as a dataset CSV
    Generate(GenerateArgs),
    /// Print the class histogram of a dataset
    Distribution(DistributionArgs),
    /// Rebalance a dataset so every surviving class has the same row count
    Resample(ResampleArgs),
    /// Print complement-ratio class weights for a dataset
    Weights(WeightsArgs),
    /// Train one classifier on a stratified split and report its metrics
    TrainEval(TrainEvalArgs),
    /// Run a (filter × sample) grid of train-eval cells
    Sweep(SweepArgs),
    /// Compare mean per-class recall between two confusion-matrix files
    CompareRecall(CompareRecallArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Key=value file (or any output header) supplying defaults
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Destination CSV
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Number of classes, majority included
    #[arg(long)]
    pub classes: Option<usize>,
    /// Rows in the smallest class
    #[arg(long)]
    pub min_minority: Option<usize>,
    /// Rows in the largest minority class
    #[arg(long)]
    pub max_minority: Option<usize>,
    /// Rows in the majority class
    #[arg(long)]
    pub majority: Option<usize>,
    /// Tokens in each class-private vocabulary
    #[arg(long)]
    pub vocab: Option<usize>,
    /// Probability of drawing a token from the shared vocabulary (0..=1)
    #[arg(long)]
    pub overlap: Option<f64>,
    /// Minimum sentence length in tokens
    #[arg(long)]
    pub min_len: Option<usize>,
    /// Maximum sentence length in tokens
    #[arg(long)]
    pub max_len: Option<usize>,
    /// Generator seed
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct DistributionArgs {
    /// Key=value file (or any output header) supplying defaults
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Dataset CSV to inspect
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Also write the histogram as a `label,count` CSV
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ResampleArgs {
    /// Key=value file (or any output header) supplying defaults
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Dataset CSV to rebalance
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Destination CSV (must differ from the input)
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Drop classes with fewer rows than this
    #[arg(long)]
    pub filter: Option<usize>,
    /// Rows per class after rebalancing
    #[arg(long)]
    pub sample: Option<usize>,
    /// Resampling seed
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct WeightsArgs {
    /// Key=value file (or any output header) supplying defaults
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Dataset CSV to weigh
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Drop classes with fewer rows than this before weighing
    #[arg(long)]
    pub filter: Option<usize>,
    /// Also write the table as a `label,count,weight` CSV
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

/// Training hyperparameters shared by `train-eval` and `sweep`.
#[derive(Debug, Args)]
pub struct HyperArgs {
    /// Laplace smoothing constant (nb)
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Hidden layer width (mlp, mlp-cs)
    #[arg(long)]
    pub hidden: Option<usize>,
    /// Learning rate (mlp, mlp-cs)
    #[arg(long)]
    pub learning_rate: Option<f64>,
    /// Training epochs (mlp, mlp-cs)
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Minibatch size (mlp, mlp-cs)
    #[arg(long)]
    pub batch_size: Option<usize>,
    /// Update rule: sgd or adam (mlp, mlp-cs)
    #[arg(long)]
    pub optimizer: Option<String>,
}

#[derive(Debug, Args)]
pub struct TrainEvalArgs {
    /// Key=value file (or any output header) supplying defaults
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Dataset CSV to train on (or to evaluate with `--model-in`)
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Classifier: nb, mlp, or mlp-cs
    #[arg(long)]
    pub classifier: Option<String>,
    /// Drop classes with fewer rows than this
    #[arg(long)]
    pub filter: Option<usize>,
    /// Balance the training side to this many rows per class
    #[arg(long, conflicts_with = "no_resample")]
    pub sample: Option<usize>,
    /// Train on the split as-is, overriding any configured sample target
    #[arg(long)]
    pub no_resample: bool,
    /// Training share of the stratified split, in (0, 1)
    #[arg(long)]
    pub split: Option<f64>,
    /// Run seed (a sweep cell's recorded seed reproduces that cell)
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub hyper: HyperArgs,
    /// Write the confusion matrix as CSV
    #[arg(long, value_name = "FILE")]
    pub matrix_out: Option<PathBuf>,
    /// Write the per-class metrics report as CSV
    #[arg(long, value_name = "FILE")]
    pub report_out: Option<PathBuf>,
    /// Save the trained model
    #[arg(long, value_name = "FILE")]
    pub model_out: Option<PathBuf>,
    /// Skip training: load this model and evaluate it on the whole input
    #[arg(
        long,
        value_name = "FILE",
        conflicts_with_all = [
            "classifier", "filter", "sample", "no_resample", "split", "seed", "model_out",
            "alpha", "hidden", "learning_rate", "epochs", "batch_size", "optimizer",
        ]
    )]
    pub model_in: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Key=value file (or any output header) supplying defaults
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Dataset CSV to sweep over
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Classifier: nb, mlp, or mlp-cs
    #[arg(long)]
    pub classifier: Option<String>,
    /// Filter values as `n` or an inclusive range `a:b:step`
    #[arg(long, value_name = "RANGE")]
    pub filters: Option<String>,
    /// Sample values as `n` or `a:b:step`; omit for the filter-only baseline
    #[arg(long, value_name = "RANGE")]
    pub samples: Option<String>,
    /// Training share of the stratified split, in (0, 1)
    #[arg(long)]
    pub split: Option<f64>,
    /// Base seed; each cell derives its own from (seed, filter, sample)
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub hyper: HyperArgs,
    /// Results CSV destination
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Write a whitespace table of accuracies for plotting
    #[arg(long, value_name = "FILE")]
    pub plot_out: Option<PathBuf>,
    /// Write one confusion-matrix CSV per successful cell into this directory
    #[arg(long, value_name = "DIR")]
    pub report_dir: Option<PathBuf>,
    /// Worker threads; never changes the output, only how fast it appears
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CompareRecallArgs {
    /// Key=value file (or any output header) supplying defaults
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Confusion-matrix CSV of the reference run
    #[arg(long, value_name = "FILE")]
    pub baseline: Option<PathBuf>,
    /// Confusion-matrix CSV of the run being judged
    #[arg(long, value_name = "FILE")]
    pub treated: Option<PathBuf>,
}
