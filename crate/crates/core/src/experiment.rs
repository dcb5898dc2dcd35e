//! The evaluation harness: runs one (filter, sample) cell end to end and
//! sweeps whole grids of them.
//!
//! A cell always evaluates on rows the classifier never saw: the filtered
//! dataset is split first, and only the training side is balanced. Resampled
//! copies therefore never reach the test set. Cell seeds derive from
//! `(base seed, filter, sample)`, so any single cell can be re-run on its
//! own and must reproduce its sweep record exactly.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::costsensitive::{train_mlp, ClassWeights, CostError, MlpConfig, MlpModel, Optimizer};
use crate::dataset::{stratified_split_indices, ClassDistribution, Dataset, DatasetError};
use crate::metrics::{ConfusionMatrix, MetricsError};
use crate::nbayes::{train_nb, NaiveBayesModel, NbError, Vocabulary};
use crate::resample::{filter_classes, middlesample, MiddleSampleParams, ResampleError};
use crate::rng::{self, stream};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExperimentError {
    #[error("split fraction {0} is outside (0, 1)")]
    InvalidSplitFraction(f64),
    #[error("sample target must be at least 1")]
    InvalidSample,
    #[error("no class survives filter {filter}")]
    NoSurvivingClass { filter: usize },
    #[error("class {label} has only {count} rows, too few to split")]
    CannotStratify { label: String, count: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Resample(#[from] ResampleError),
    #[error(transparent)]
    NaiveBayes(#[from] NbError),
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// Which model a cell trains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classifier {
    NaiveBayes,
    Mlp,
    /// The network trained with population-complement class weights.
    MlpCostSensitive,
}

impl Classifier {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "nb" => Some(Self::NaiveBayes),
            "mlp" => Some(Self::Mlp),
            "mlp-cs" => Some(Self::MlpCostSensitive),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::NaiveBayes => "nb",
            Self::Mlp => "mlp",
            Self::MlpCostSensitive => "mlp-cs",
        }
    }
}

impl core::fmt::Display for Classifier {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classifier hyperparameters shared by every cell of a sweep. The
/// network fields are ignored for Naive Bayes cells, and `alpha` for
/// network cells.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainSettings {
    pub alpha: f64,
    pub hidden_units: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub optimizer: Optimizer,
}

impl Default for TrainSettings {
    fn default() -> Self {
        Self {
            alpha: crate::nbayes::DEFAULT_ALPHA,
            hidden_units: 64,
            learning_rate: 0.1,
            epochs: 20,
            batch_size: 32,
            optimizer: Optimizer::Sgd,
        }
    }
}

/// A validated sweep grid. An empty `sample_values` list means the baseline
/// protocol: filter only, no balancing.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    filter_values: Vec<usize>,
    sample_values: Vec<usize>,
    classifier: Classifier,
    split_fraction: f64,
    base_seed: u64,
}

impl SweepGrid {
    pub fn new(
        filter_values: Vec<usize>,
        sample_values: Vec<usize>,
        classifier: Classifier,
        split_fraction: f64,
        base_seed: u64,
    ) -> Result<Self, ExperimentError> {
        if filter_values.is_empty() {
            return Err(ExperimentError::InvalidGrid("no filter values"));
        }
        if !strictly_increasing(&filter_values) {
            return Err(ExperimentError::InvalidGrid("filter values must be strictly increasing"));
        }
        if !strictly_increasing(&sample_values) {
            return Err(ExperimentError::InvalidGrid("sample values must be strictly increasing"));
        }
        if sample_values.first() == Some(&0) {
            return Err(ExperimentError::InvalidGrid("sample values must be at least 1"));
        }
        if !(split_fraction > 0.0 && split_fraction < 1.0) {
            return Err(ExperimentError::InvalidSplitFraction(split_fraction));
        }
        Ok(Self { filter_values, sample_values, classifier, split_fraction, base_seed })
    }

    pub fn filter_values(&self) -> &[usize] {
        &self.filter_values
    }

    pub fn sample_values(&self) -> &[usize] {
        &self.sample_values
    }

    pub fn classifier(&self) -> Classifier {
        self.classifier
    }

    pub fn split_fraction(&self) -> f64 {
        self.split_fraction
    }

    pub fn base_seed(&self) -> u64 {
        self.base_seed
    }

    /// All cells in canonical order: filter ascending, then sample ascending.
    pub fn cells(&self) -> Vec<(usize, Option<usize>)> {
        let mut cells = Vec::new();
        for &filter in &self.filter_values {
            if self.sample_values.is_empty() {
                cells.push((filter, None));
            } else {
                for &sample in &self.sample_values {
                    cells.push((filter, Some(sample)));
                }
            }
        }
        cells
    }
}

fn strictly_increasing(values: &[usize]) -> bool {
    values.windows(2).all(|w| w[0] < w[1])
}

/// Outcome of one grid cell. Failed cells keep their parameters and a
/// human-readable reason but no metric values.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub filter: usize,
    pub sample: Option<usize>,
    pub classifier: Classifier,
    pub accuracy: Option<f64>,
    pub macro_recall: Option<f64>,
    /// Classes surviving the filter.
    pub classes: usize,
    pub seed: u64,
    pub status: CellStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellStatus {
    Ok,
    Failed(String),
}

impl CellStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, CellStatus::Ok)
    }
}

/// Deterministic per-cell seed, mixed from the sweep seed and the cell's
/// grid coordinates.
pub fn cell_seed(base_seed: u64, filter: usize, sample: Option<usize>) -> u64 {
    let with_filter = rng::derive(base_seed, filter as u64);
    rng::derive(with_filter, match sample {
        Some(s) => s as u64 + 1,
        None => 0,
    })
}

/// The data a cell trains and evaluates on, with index-level provenance:
/// `train_indices` and `test_indices` point into `filtered` and are
/// disjoint, and `train` is built from the training side only.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedCell {
    /// Surviving classes, ascending.
    pub labels: Vec<String>,
    /// The dataset after class filtering, before splitting.
    pub filtered: Dataset,
    /// Training rows, balanced when the cell has a sample target.
    pub train: Dataset,
    /// Untouched original rows for evaluation.
    pub test: Dataset,
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
}

/// Filters, splits, and (when `sample` is given) balances the training side.
pub fn prepare_cell(
    ds: &Dataset,
    filter: usize,
    sample: Option<usize>,
    split_fraction: f64,
    seed: u64,
) -> Result<PreparedCell, ExperimentError> {
    if !(split_fraction > 0.0 && split_fraction < 1.0) {
        return Err(ExperimentError::InvalidSplitFraction(split_fraction));
    }
    if sample == Some(0) {
        return Err(ExperimentError::InvalidSample);
    }

    let filtered = filter_classes(ds, filter);
    let dist = filtered.class_distribution();
    if dist.total() == 0 {
        return Err(ExperimentError::NoSurvivingClass { filter });
    }
    for (label, &count) in dist.counts() {
        if count < 2 {
            return Err(ExperimentError::CannotStratify { label: label.clone(), count });
        }
    }

    let (train_indices, test_indices) =
        stratified_split_indices(&filtered, split_fraction, rng::derive(seed, stream::SPLIT))?;
    let train_pool = filtered.subset(&train_indices);
    let test = filtered.subset(&test_indices);

    let train = match sample {
        Some(sample) => middlesample(
            &train_pool,
            // The class filter already ran on the whole dataset; within the
            // training side every class must survive.
            &MiddleSampleParams { filter: 0, sample, seed: rng::derive(seed, stream::RESAMPLE) },
        )?,
        None => train_pool,
    };

    Ok(PreparedCell {
        labels: dist.labels().map(String::from).collect(),
        filtered,
        train,
        test,
        train_indices,
        test_indices,
    })
}

/// A classifier trained for one cell, ready to label raw text.
#[derive(Debug, Clone, PartialEq)]
pub enum TrainedClassifier {
    NaiveBayes(NaiveBayesModel),
    Network {
        model: MlpModel,
        vocabulary: Vocabulary,
        cost_sensitive: bool,
    },
}

impl TrainedClassifier {
    pub fn kind(&self) -> Classifier {
        match self {
            Self::NaiveBayes(_) => Classifier::NaiveBayes,
            Self::Network { cost_sensitive: false, .. } => Classifier::Mlp,
            Self::Network { cost_sensitive: true, .. } => Classifier::MlpCostSensitive,
        }
    }

    pub fn labels(&self) -> &[String] {
        match self {
            Self::NaiveBayes(model) => model.labels(),
            Self::Network { model, .. } => model.labels(),
        }
    }

    pub fn predict(&self, text: &str) -> Result<&str, ExperimentError> {
        match self {
            Self::NaiveBayes(model) => Ok(model.predict(text)),
            Self::Network { model, vocabulary, .. } => {
                Ok(model.predict(&vocabulary.count_vector(text))?)
            }
        }
    }
}

/// Trains the chosen classifier on already-prepared training rows.
/// `cost_basis` is the distribution whose imbalance sets the cost-sensitive
/// weights — the filtered originals, not the balanced training rows.
pub fn train_classifier(
    train: &Dataset,
    cost_basis: &ClassDistribution,
    classifier: Classifier,
    settings: &TrainSettings,
    seed: u64,
) -> Result<TrainedClassifier, ExperimentError> {
    match classifier {
        Classifier::NaiveBayes => Ok(TrainedClassifier::NaiveBayes(train_nb(train, settings.alpha)?)),
        Classifier::Mlp | Classifier::MlpCostSensitive => {
            let vocabulary = Vocabulary::from_dataset(train);
            let cost_sensitive = classifier == Classifier::MlpCostSensitive;
            let weights = if cost_sensitive {
                Some(ClassWeights::from_distribution(cost_basis)?)
            } else {
                None
            };
            let config = MlpConfig {
                hidden_units: settings.hidden_units,
                learning_rate: settings.learning_rate,
                epochs: settings.epochs,
                batch_size: settings.batch_size,
                optimizer: settings.optimizer,
                seed,
            };
            let report = train_mlp(train, &vocabulary, weights.as_ref(), &config)?;
            Ok(TrainedClassifier::Network { model: report.model, vocabulary, cost_sensitive })
        }
    }
}

/// Scores a trained classifier on the test rows over the given class roster.
pub fn evaluate(
    trained: &TrainedClassifier,
    test: &Dataset,
    labels: &[String],
) -> Result<ConfusionMatrix, ExperimentError> {
    let mut predictions = Vec::with_capacity(test.len());
    for ex in test {
        predictions.push((ex.label.as_str(), trained.predict(&ex.occurrence)?));
    }
    let label_refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    Ok(ConfusionMatrix::from_pairs(&predictions, &label_refs)?)
}

/// Runs one cell: prepare, train the chosen classifier, predict the test
/// rows, and score. Returns the record together with the confusion matrix
/// it was scored from.
pub fn run_cell(
    ds: &Dataset,
    filter: usize,
    sample: Option<usize>,
    classifier: Classifier,
    settings: &TrainSettings,
    split_fraction: f64,
    seed: u64,
) -> Result<(SweepRecord, ConfusionMatrix), ExperimentError> {
    let cell = prepare_cell(ds, filter, sample, split_fraction, seed)?;
    let trained = train_classifier(
        &cell.train,
        &cell.filtered.class_distribution(),
        classifier,
        settings,
        seed,
    )?;
    let matrix = evaluate(&trained, &cell.test, &cell.labels)?;

    let record = SweepRecord {
        filter,
        sample,
        classifier,
        accuracy: Some(matrix.accuracy()?.value()),
        macro_recall: Some(matrix.macro_recall()?),
        classes: cell.labels.len(),
        seed,
        status: CellStatus::Ok,
    };
    Ok((record, matrix))
}

/// Runs one grid cell with its derived seed, turning any failure into a
/// `Failed` record instead of an error. The matrix is present exactly when
/// the record's status is `Ok`.
pub fn run_grid_cell(
    ds: &Dataset,
    grid: &SweepGrid,
    settings: &TrainSettings,
    filter: usize,
    sample: Option<usize>,
) -> (SweepRecord, Option<ConfusionMatrix>) {
    let seed = cell_seed(grid.base_seed(), filter, sample);
    match run_cell(ds, filter, sample, grid.classifier(), settings, grid.split_fraction(), seed) {
        Ok((record, matrix)) => (record, Some(matrix)),
        Err(e) => (
            SweepRecord {
                filter,
                sample,
                classifier: grid.classifier(),
                accuracy: None,
                macro_recall: None,
                classes: surviving_classes(&ds.class_distribution(), filter),
                seed,
                status: CellStatus::Failed(format!("{e}")),
            },
            None,
        ),
    }
}

/// Runs every cell of the grid in canonical order. Cell failures become
/// `Failed` records instead of aborting the sweep.
pub fn run_sweep(ds: &Dataset, grid: &SweepGrid, settings: &TrainSettings) -> Vec<SweepRecord> {
    grid.cells()
        .into_iter()
        .map(|(filter, sample)| run_grid_cell(ds, grid, settings, filter, sample).0)
        .collect()
}

fn surviving_classes(dist: &ClassDistribution, filter: usize) -> usize {
    dist.counts().values().filter(|&&c| c >= filter).count()
}

/// Macro-recall of two runs side by side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecallComparison {
    pub baseline: f64,
    pub treated: f64,
    pub delta: f64,
}

/// Compares mean per-class recall between a baseline matrix and a treated
/// one. Fails if either matrix has a class with no test rows.
pub fn compare_recall(
    baseline: &ConfusionMatrix,
    treated: &ConfusionMatrix,
) -> Result<RecallComparison, ExperimentError> {
    let baseline = baseline.macro_recall()?;
    let treated = treated.macro_recall()?;
    Ok(RecallComparison { baseline, treated, delta: treated - baseline })
}

/// Ranking criterion for [`best_point`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    Accuracy,
    MacroRecall,
}

/// The successful record with the highest criterion value. Ties prefer the
/// smaller filter, then the smaller sample, to keep more of the data.
pub fn best_point<'a>(records: &'a [SweepRecord], criterion: Criterion) -> Option<&'a SweepRecord> {
    let mut best: Option<(&SweepRecord, f64)> = None;
    for record in records {
        if !record.status.is_ok() {
            continue;
        }
        let value = match criterion {
            Criterion::Accuracy => record.accuracy,
            Criterion::MacroRecall => record.macro_recall,
        };
        let Some(value) = value.filter(|v| v.is_finite()) else { continue };
        let replace = match best {
            None => true,
            Some((current, best_value)) => {
                value > best_value
                    || (value == best_value
                        && (record.filter, record.sample) < (current.filter, current.sample))
            }
        };
        if replace {
            best = Some((record, value));
        }
    }
    best.map(|(record, _)| record)
}
