//! `sweep`: run every (filter, sample) cell of a grid, emitting a results
//! CSV, an optional plot table, and optional per-cell confusion matrices.
//!
//! Cells run on `--jobs` worker threads but are assembled in canonical grid
//! order, so the job count can never change a single output byte.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rebalance_core::experiment::{
    best_point, run_grid_cell, CellStatus, Criterion, SweepGrid, SweepRecord, TrainSettings,
};
use rebalance_core::metrics::ConfusionMatrix;
use rebalance_core::Dataset;

use super::{echo_hypers, merger_for, parse_classifier, path_string, resolve_hypers};
use crate::args::SweepArgs;
use crate::config::RunConfig;
use crate::data_io::load_dataset;
use crate::error::{CliError, CliResult};
use crate::matrix_io::save_matrix;
use crate::plot::save_plot;
use crate::ranges::parse_range;

pub const DEFAULT_SPLIT: f64 = 0.8;
pub const DEFAULT_SEED: u64 = 42;

pub fn run(args: SweepArgs) -> CliResult<()> {
    let mut merger = merger_for(&args.config, "sweep")?;
    let input = merger.required("input", args.input)?;
    let classifier_raw = merger.value("classifier", args.classifier, "nb".to_string())?;
    let classifier = parse_classifier(&classifier_raw)?;
    let filters_raw: String = merger.required("filters", args.filters)?;
    let samples_raw: Option<String> = merger.optional("samples", args.samples)?;
    let split = merger.value("split", args.split, DEFAULT_SPLIT)?;
    let seed = merger.value("seed", args.seed, DEFAULT_SEED)?;
    let settings = resolve_hypers(&mut merger, &args.hyper)?;
    let out = merger.required("out", args.out)?;
    let plot_out = merger.optional("plot-out", args.plot_out)?;
    let report_dir = merger.optional("report-dir", args.report_dir)?;
    merger.finish()?;

    // Parallelism is execution mechanics, not part of the run's identity:
    // it is deliberately absent from config files and headers.
    let jobs = args.jobs.unwrap_or(1);
    if jobs == 0 {
        return Err(CliError::usage("`--jobs` must be at least 1"));
    }

    let filter_values = parse_range(&filters_raw)?;
    let sample_values = match &samples_raw {
        Some(raw) => parse_range(raw)?,
        None => Vec::new(),
    };
    let grid = SweepGrid::new(filter_values, sample_values, classifier, split, seed)?;

    let mut config = RunConfig::new("sweep");
    config.push("input", path_string(&input));
    config.push("classifier", classifier.as_str());
    config.push("filters", &filters_raw);
    config.push_opt("samples", samples_raw.as_ref());
    config.push("split", split);
    config.push("seed", seed);
    echo_hypers(&mut config, classifier, &settings);
    config.push("out", path_string(&out));
    config.push_opt("plot-out", plot_out.as_ref().map(path_string));
    config.push_opt("report-dir", report_dir.as_ref().map(path_string));

    let ds = load_dataset(&input)?;
    let results = run_cells(&ds, &grid, &settings, jobs);

    save_results(&out, &results, &config)?;
    if let Some(plot_out) = plot_out {
        let records: Vec<SweepRecord> = results.iter().map(|(r, _)| r.clone()).collect();
        save_plot(&plot_out, &records, &config)?;
    }
    if let Some(report_dir) = report_dir {
        save_reports(&report_dir, &results, &config)?;
    }

    print_summary(&results);
    Ok(())
}

/// Runs all grid cells, in parallel when `jobs > 1`, returning them in
/// canonical grid order regardless of completion order.
fn run_cells(
    ds: &Dataset,
    grid: &SweepGrid,
    settings: &TrainSettings,
    jobs: usize,
) -> Vec<(SweepRecord, Option<ConfusionMatrix>)> {
    let cells = grid.cells();
    if jobs == 1 || cells.len() <= 1 {
        return cells
            .into_iter()
            .map(|(filter, sample)| run_grid_cell(ds, grid, settings, filter, sample))
            .collect();
    }

    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<(SweepRecord, Option<ConfusionMatrix>)>>> =
        Mutex::new(vec![None; cells.len()]);
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(cells.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(filter, sample)) = cells.get(i) else { break };
                let result = run_grid_cell(ds, grid, settings, filter, sample);
                slots.lock().expect("worker panicked holding results")[i] = Some(result);
            });
        }
    });
    slots
        .into_inner()
        .expect("worker panicked holding results")
        .into_iter()
        .map(|slot| slot.expect("every cell index was claimed by a worker"))
        .collect()
}

fn save_results(
    path: &Path,
    results: &[(SweepRecord, Option<ConfusionMatrix>)],
    config: &RunConfig,
) -> CliResult<()> {
    let mut buf = config.header()?.into_bytes();
    {
        let mut writer = csv::Writer::from_writer(&mut buf);
        writer
            .write_record(["filter", "sample", "classifier", "accuracy", "macro_recall", "classes", "seed", "status"])
            .map_err(|e| CliError::runtime(e.to_string()))?;
        for (record, _) in results {
            let sample = record.sample.map(|s| s.to_string()).unwrap_or_default();
            let accuracy = record.accuracy.map(|v| v.to_string()).unwrap_or_default();
            let macro_recall = record.macro_recall.map(|v| v.to_string()).unwrap_or_default();
            let status = match &record.status {
                CellStatus::Ok => "ok".to_string(),
                CellStatus::Failed(reason) => format!("failed: {reason}"),
            };
            writer
                .write_record([
                    record.filter.to_string(),
                    sample,
                    record.classifier.as_str().to_string(),
                    accuracy,
                    macro_recall,
                    record.classes.to_string(),
                    record.seed.to_string(),
                    status,
                ])
                .map_err(|e| CliError::runtime(e.to_string()))?;
        }
        writer.flush()?;
    }
    std::fs::write(path, buf).map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))
}

fn save_reports(
    dir: &Path,
    results: &[(SweepRecord, Option<ConfusionMatrix>)],
    config: &RunConfig,
) -> CliResult<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::runtime(format!("{}: {e}", dir.display())))?;
    for (record, matrix) in results {
        let Some(matrix) = matrix else { continue };
        let name = match record.sample {
            Some(sample) => format!("cell-f{}-s{}.csv", record.filter, sample),
            None => format!("cell-f{}.csv", record.filter),
        };
        save_matrix(&dir.join(name), matrix, config)?;
    }
    Ok(())
}

fn print_summary(results: &[(SweepRecord, Option<ConfusionMatrix>)]) {
    let records: Vec<SweepRecord> = results.iter().map(|(r, _)| r.clone()).collect();
    let failed = records.iter().filter(|r| !r.status.is_ok()).count();
    println!("cells: {} ok, {} failed", records.len() - failed, failed);
    for (title, criterion) in
        [("best accuracy", Criterion::Accuracy), ("best macro recall", Criterion::MacroRecall)]
    {
        match best_point(&records, criterion) {
            Some(best) => {
                let sample = best.sample.map(|s| s.to_string()).unwrap_or_else(|| "-".into());
                println!(
                    "{title}: filter {} sample {} -> accuracy {:.6}, macro recall {:.6}",
                    best.filter,
                    sample,
                    best.accuracy.unwrap_or(f64::NAN),
                    best.macro_recall.unwrap_or(f64::NAN),
                );
            }
            None => println!("{title}: no successful cell"),
        }
    }
}
