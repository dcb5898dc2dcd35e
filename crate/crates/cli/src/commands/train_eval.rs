//! `train-eval`: one train/evaluate run on a stratified split, or — with
//! `--model-in` — evaluation of a saved model on the whole input.

use std::path::PathBuf;

use rebalance_core::experiment::{evaluate, prepare_cell, train_classifier};
use rebalance_core::metrics::report::{csv_report, text_report};
use rebalance_core::metrics::ConfusionMatrix;

use super::{echo_hypers, merger_for, parse_classifier, path_string, resolve_hypers};
use crate::args::TrainEvalArgs;
use crate::config::{Merger, RunConfig};
use crate::data_io::load_dataset;
use crate::error::{CliError, CliResult};
use crate::matrix_io::save_matrix;
use crate::model_io::{load_model, save_model};

pub const DEFAULT_SPLIT: f64 = 0.8;
pub const DEFAULT_SEED: u64 = 42;

pub fn run(args: TrainEvalArgs) -> CliResult<()> {
    let mut merger = merger_for(&args.config, "train-eval")?;
    // Evaluation mode is chosen by `--model-in` on either layer; a config
    // written by an evaluation run re-enters evaluation mode by itself.
    let model_in = merger.optional("model-in", args.model_in.clone())?;
    match model_in {
        Some(model_in) => run_eval(args, merger, model_in),
        None => run_train(args, merger),
    }
}

fn run_train(args: TrainEvalArgs, mut merger: Merger) -> CliResult<()> {
    let input = merger.required("input", args.input)?;
    let classifier_raw = merger.value("classifier", args.classifier, "nb".to_string())?;
    let classifier = parse_classifier(&classifier_raw)?;
    let filter = merger.value("filter", args.filter, 0usize)?;
    let sample = resolve_sample(&mut merger, args.sample, args.no_resample)?;
    let split = merger.value("split", args.split, DEFAULT_SPLIT)?;
    let seed = merger.value("seed", args.seed, DEFAULT_SEED)?;
    let settings = resolve_hypers(&mut merger, &args.hyper)?;
    let matrix_out = merger.optional("matrix-out", args.matrix_out)?;
    let report_out = merger.optional("report-out", args.report_out)?;
    let model_out = merger.optional("model-out", args.model_out)?;
    merger.finish()?;

    let mut config = RunConfig::new("train-eval");
    config.push("input", path_string(&input));
    config.push("classifier", classifier.as_str());
    config.push("filter", filter);
    config.push_opt("sample", sample);
    config.push("split", split);
    config.push("seed", seed);
    echo_hypers(&mut config, classifier, &settings);
    config.push_opt("matrix-out", matrix_out.as_ref().map(path_string));
    config.push_opt("report-out", report_out.as_ref().map(path_string));
    config.push_opt("model-out", model_out.as_ref().map(path_string));

    let ds = load_dataset(&input)?;
    let cell = prepare_cell(&ds, filter, sample, split, seed)?;
    let trained = train_classifier(
        &cell.train,
        &cell.filtered.class_distribution(),
        classifier,
        &settings,
        seed,
    )?;
    let matrix = evaluate(&trained, &cell.test, &cell.labels)?;

    println!(
        "{} on {} test rows ({} train rows, {} classes, seed {})",
        classifier.as_str(),
        cell.test.len(),
        cell.train.len(),
        cell.labels.len(),
        seed
    );
    report(&matrix, &config, matrix_out, report_out)?;
    if let Some(model_out) = model_out {
        save_model(&model_out, &trained, &config)?;
    }
    Ok(())
}

fn run_eval(args: TrainEvalArgs, mut merger: Merger, model_in: PathBuf) -> CliResult<()> {
    // Everything that shapes training is meaningless here; reject it
    // whichever layer it came from (clap already rejects flag+flag).
    let stray = [
        ("--classifier", args.classifier.is_some() || merger.in_config("classifier")),
        ("--filter", args.filter.is_some() || merger.in_config("filter")),
        ("--sample", args.sample.is_some() || merger.in_config("sample")),
        ("--no-resample", args.no_resample || merger.in_config("no-resample")),
        ("--split", args.split.is_some() || merger.in_config("split")),
        ("--seed", args.seed.is_some() || merger.in_config("seed")),
        ("--model-out", args.model_out.is_some() || merger.in_config("model-out")),
        ("--alpha", args.hyper.alpha.is_some() || merger.in_config("alpha")),
        ("--hidden", args.hyper.hidden.is_some() || merger.in_config("hidden")),
        (
            "--learning-rate",
            args.hyper.learning_rate.is_some() || merger.in_config("learning-rate"),
        ),
        ("--epochs", args.hyper.epochs.is_some() || merger.in_config("epochs")),
        ("--batch-size", args.hyper.batch_size.is_some() || merger.in_config("batch-size")),
        ("--optimizer", args.hyper.optimizer.is_some() || merger.in_config("optimizer")),
    ];
    if let Some((flag, _)) = stray.iter().find(|(_, set)| *set) {
        return Err(CliError::usage(format!("`{flag}` cannot be combined with `--model-in`")));
    }

    let input = merger.required("input", args.input)?;
    let matrix_out = merger.optional("matrix-out", args.matrix_out)?;
    let report_out = merger.optional("report-out", args.report_out)?;
    merger.finish()?;

    let mut config = RunConfig::new("train-eval");
    config.push("input", path_string(&input));
    config.push("model-in", path_string(&model_in));
    config.push_opt("matrix-out", matrix_out.as_ref().map(path_string));
    config.push_opt("report-out", report_out.as_ref().map(path_string));

    let ds = load_dataset(&input)?;
    let trained = load_model(&model_in)?;
    let labels = trained.labels().to_vec();
    let matrix = evaluate(&trained, &ds, &labels)?;

    println!(
        "{} from {} on {} test rows ({} classes)",
        trained.kind().as_str(),
        model_in.display(),
        ds.len(),
        labels.len()
    );
    report(&matrix, &config, matrix_out, report_out)
}

/// The effective per-class sample target. Within one layer `sample` and
/// `no-resample` exclude each other; across layers the command line wins.
fn resolve_sample(
    merger: &mut Merger,
    cli_sample: Option<usize>,
    cli_no_resample: bool,
) -> CliResult<Option<usize>> {
    let config_sample: Option<usize> = merger.optional("sample", None)?;
    let config_no_resample = merger.flag("no-resample", false)?;
    if config_sample.is_some() && config_no_resample {
        return Err(CliError::usage("config sets both `sample` and `no-resample`"));
    }
    if cli_sample.is_some() && cli_no_resample {
        return Err(CliError::usage("`--sample` conflicts with `--no-resample`"));
    }
    Ok(if cli_no_resample {
        None
    } else {
        cli_sample.or(if config_no_resample { None } else { config_sample })
    })
}

fn report(
    matrix: &ConfusionMatrix,
    config: &RunConfig,
    matrix_out: Option<PathBuf>,
    report_out: Option<PathBuf>,
) -> CliResult<()> {
    print!("{}", text_report(matrix)?);
    if let Some(path) = matrix_out {
        save_matrix(&path, matrix, config)?;
    }
    if let Some(path) = report_out {
        let mut body = config.header()?;
        body.push_str(&csv_report(matrix)?);
        std::fs::write(&path, body)
            .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}
