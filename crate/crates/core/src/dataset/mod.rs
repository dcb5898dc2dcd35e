//! Labeled text rows, class distributions, and seeded stratified splits.

mod synthetic;

pub use synthetic::{generate_synthetic, long_tail_counts, long_tail_spec, ClassSpec};

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use rand::seq::SliceRandom;

use crate::rng;

/// Errors raised by dataset construction, splitting, and generation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DatasetError {
    #[error("label is empty")]
    EmptyLabel,
    #[error("occurrence is empty")]
    EmptyOccurrence,
    #[error("train fraction {0} is outside (0, 1)")]
    InvalidTrainFraction(f64),
    #[error("class specs are empty")]
    EmptySpec,
    #[error("class {label}: {reason}")]
    InvalidClassSpec { label: String, reason: &'static str },
    #[error("duplicate class label {0}")]
    DuplicateLabel(String),
    #[error("sentence length range {min}..{max} is invalid")]
    InvalidLengthRange { min: usize, max: usize },
}

/// One data row: a class label and the raw text to classify.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledExample {
    pub label: String,
    pub occurrence: String,
}

impl LabeledExample {
    /// Builds a row, rejecting empty labels and whitespace-only text.
    pub fn new(label: impl Into<String>, occurrence: impl Into<String>) -> Result<Self, DatasetError> {
        let label = label.into();
        let occurrence = occurrence.into();
        if label.is_empty() {
            return Err(DatasetError::EmptyLabel);
        }
        if occurrence.trim().is_empty() {
            return Err(DatasetError::EmptyOccurrence);
        }
        Ok(Self { label, occurrence })
    }
}

/// An ordered multiset of labeled rows. Duplicates are meaningful: resampling
/// works by replicating and removing rows.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Dataset {
    examples: Vec<LabeledExample>,
}

impl Dataset {
    pub fn new(examples: Vec<LabeledExample>) -> Self {
        Self { examples }
    }

    pub fn examples(&self) -> &[LabeledExample] {
        &self.examples
    }

    pub fn iter(&self) -> core::slice::Iter<'_, LabeledExample> {
        self.examples.iter()
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    /// Counts rows per label.
    pub fn class_distribution(&self) -> ClassDistribution {
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for ex in &self.examples {
            *counts.entry(ex.label.clone()).or_insert(0) += 1;
        }
        ClassDistribution { total: self.examples.len(), counts }
    }

    /// Clones the rows at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset::new(indices.iter().map(|&i| self.examples[i].clone()).collect())
    }
}

impl FromIterator<LabeledExample> for Dataset {
    fn from_iter<T: IntoIterator<Item = LabeledExample>>(iter: T) -> Self {
        Dataset::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Dataset {
    type Item = &'a LabeledExample;
    type IntoIter = core::slice::Iter<'a, LabeledExample>;

    fn into_iter(self) -> Self::IntoIter {
        self.examples.iter()
    }
}

/// Per-class row counts for one dataset. Labels with zero rows never appear.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDistribution {
    counts: BTreeMap<String, usize>,
    total: usize,
}

impl ClassDistribution {
    /// Count for one label; zero when absent.
    pub fn count(&self, label: &str) -> usize {
        self.counts.get(label).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<String, usize> {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.total
    }

    /// Number of distinct classes.
    pub fn class_count(&self) -> usize {
        self.counts.len()
    }

    /// Labels in ascending order.
    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.counts.keys().map(String::as_str)
    }
}

/// Splits each class separately: `floor(count · train_fraction)` rows to
/// train (at least 1 when the class has ≥ 2 rows, and at least 1 left for
/// test), the rest to test. Classes with a single row go to train whole.
///
/// Returns `(train, test)`. The union of the two sides is the input as a
/// multiset, and the outcome depends only on the inputs and the seed.
pub fn stratified_split(
    ds: &Dataset,
    train_fraction: f64,
    seed: u64,
) -> Result<(Dataset, Dataset), DatasetError> {
    let (train_idx, test_idx) = stratified_split_indices(ds, train_fraction, seed)?;
    Ok((ds.subset(&train_idx), ds.subset(&test_idx)))
}

/// Index-level form of [`stratified_split`]: returns positions into `ds`
/// instead of materialized rows, so callers can track row identity across
/// the split.
pub fn stratified_split_indices(
    ds: &Dataset,
    train_fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>), DatasetError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(DatasetError::InvalidTrainFraction(train_fraction));
    }

    let mut by_class: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, ex) in ds.iter().enumerate() {
        by_class.entry(ex.label.as_str()).or_default().push(i);
    }

    let mut train = Vec::new();
    let mut test = Vec::new();
    for (label, mut indices) in by_class {
        let c = indices.len();
        let n_train = if c == 1 {
            1
        } else {
            ((c as f64 * train_fraction) as usize).clamp(1, c - 1)
        };
        let mut rng = rng::class_rng(seed, label);
        indices.shuffle(&mut rng);
        train.extend_from_slice(&indices[..n_train]);
        test.extend_from_slice(&indices[n_train..]);
    }
    Ok((train, test))
}
