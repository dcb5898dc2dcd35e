//! One module per subcommand, plus the shared flag-resolution helpers.

mod compare;
mod distribution;
mod generate;
mod resample;
mod sweep;
mod train_eval;
mod weights;

use std::collections::BTreeMap;
use std::path::PathBuf;

use rebalance_core::costsensitive::Optimizer;
use rebalance_core::experiment::{Classifier, TrainSettings};

use crate::args::{Cli, Command, HyperArgs};
use crate::config::{load_config, Merger, RunConfig};
use crate::error::{CliError, CliResult};

pub fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Generate(args) => generate::run(args),
        Command::Distribution(args) => distribution::run(args),
        Command::Resample(args) => resample::run(args),
        Command::Weights(args) => weights::run(args),
        Command::TrainEval(args) => train_eval::run(args),
        Command::Sweep(args) => sweep::run(args),
        Command::CompareRecall(args) => compare::run(args),
    }
}

/// Loads `--config` (when given) into a [`Merger`] for this subcommand.
fn merger_for(config: &Option<PathBuf>, subcommand: &str) -> CliResult<Merger> {
    let map = match config {
        Some(path) => load_config(path, subcommand)?,
        None => BTreeMap::new(),
    };
    Ok(Merger::new(map))
}

fn parse_classifier(name: &str) -> CliResult<Classifier> {
    Classifier::parse(name).ok_or_else(|| {
        CliError::usage(format!("unknown classifier `{name}` (expected nb, mlp, or mlp-cs)"))
    })
}

fn parse_optimizer(name: &str) -> CliResult<Optimizer> {
    match name {
        "sgd" => Ok(Optimizer::Sgd),
        "adam" => Ok(Optimizer::adam_default()),
        other => Err(CliError::usage(format!("unknown optimizer `{other}` (expected sgd or adam)"))),
    }
}

fn optimizer_name(optimizer: &Optimizer) -> &'static str {
    match optimizer {
        Optimizer::Sgd => "sgd",
        Optimizer::Adam { .. } => "adam",
    }
}

/// Resolves the training hyperparameters from flags, config, and defaults.
fn resolve_hypers(merger: &mut Merger, cli: &HyperArgs) -> CliResult<TrainSettings> {
    let defaults = TrainSettings::default();
    let optimizer_raw = merger.value(
        "optimizer",
        cli.optimizer.clone(),
        optimizer_name(&defaults.optimizer).to_string(),
    )?;
    Ok(TrainSettings {
        alpha: merger.value("alpha", cli.alpha, defaults.alpha)?,
        hidden_units: merger.value("hidden", cli.hidden, defaults.hidden_units)?,
        learning_rate: merger.value("learning-rate", cli.learning_rate, defaults.learning_rate)?,
        epochs: merger.value("epochs", cli.epochs, defaults.epochs)?,
        batch_size: merger.value("batch-size", cli.batch_size, defaults.batch_size)?,
        optimizer: parse_optimizer(&optimizer_raw)?,
    })
}

/// Echoes the hyperparameters a classifier actually reads, so headers stay
/// canonical: an nb run resolved from its own header never grows extra keys.
fn echo_hypers(config: &mut RunConfig, classifier: Classifier, settings: &TrainSettings) {
    match classifier {
        Classifier::NaiveBayes => {
            config.push("alpha", settings.alpha);
        }
        Classifier::Mlp | Classifier::MlpCostSensitive => {
            config.push("hidden", settings.hidden_units);
            config.push("learning-rate", settings.learning_rate);
            config.push("epochs", settings.epochs);
            config.push("batch-size", settings.batch_size);
            config.push("optimizer", optimizer_name(&settings.optimizer));
        }
    }
}

/// `path=value` echo helper: paths are recorded exactly as given.
fn path_string(path: &PathBuf) -> String {
    path.display().to_string()
}

/// Aligned table: first column left-aligned, the rest right-aligned.
fn aligned_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut render = |cells: &[String]| {
        for (i, (cell, width)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            if i == 0 {
                out.push_str(&format!("{cell:<width$}"));
            } else {
                out.push_str(&format!("{cell:>width$}"));
            }
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    };
    render(&header.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    for row in rows {
        render(row);
    }
    out
}
