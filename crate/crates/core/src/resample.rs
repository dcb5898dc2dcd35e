//! Random oversampling, undersampling, and the hybrid filter-then-balance
//! resampler.
//!
//! The hybrid form ([`middlesample`]) first drops every class whose
//! population is below `filter`, then brings each surviving class to exactly
//! `sample` rows: each row is replicated `sample / count + 1` times, the
//! replicated list is shuffled, and the first `sample` rows are kept. Classes
//! above the target end up undersampled, classes below it oversampled.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::dataset::Dataset;
use crate::rng;

/// Parameters of the hybrid resampler.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MiddleSampleParams {
    /// Minimum class population; classes below it are dropped entirely.
    pub filter: usize,
    /// Exact per-class row count after balancing.
    pub sample: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResampleError {
    #[error("sample target must be at least 1")]
    InvalidSample,
    #[error("unknown class {0}")]
    UnknownLabel(String),
    #[error("class {label}: oversampling target {target} is below the current count {count}")]
    TargetBelowCount { label: String, target: usize, count: usize },
    #[error("class {label}: undersampling target {target} is outside 1..={count}")]
    TargetOutOfRange { label: String, target: usize, count: usize },
    #[error("no class has at least {filter} rows")]
    NoSurvivingClass { filter: usize },
}

/// Keeps exactly the rows of classes with population ≥ `filter`, preserving
/// row order. `filter = 0` returns the dataset unchanged.
pub fn filter_classes(ds: &Dataset, filter: usize) -> Dataset {
    let dist = ds.class_distribution();
    ds.iter().filter(|ex| dist.count(&ex.label) >= filter).cloned().collect()
}

/// Number of copies made of each row of a class with `count` rows before
/// shuffling and truncating to `sample`. Integer division, so the product
/// `replication_factor(sample, count) · count` always reaches `sample`.
pub fn replication_factor(sample: usize, count: usize) -> usize {
    sample / count + 1
}

/// Grows one class to exactly `target` rows by appending copies of its rows
/// drawn with replacement. The original rows all stay in place, so every one
/// of them appears at least once; other classes are untouched.
pub fn oversample_class(
    ds: &Dataset,
    label: &str,
    target: usize,
    seed: u64,
) -> Result<Dataset, ResampleError> {
    let class_rows: Vec<usize> = class_indices(ds, label);
    let count = class_rows.len();
    if count == 0 {
        return Err(ResampleError::UnknownLabel(label.into()));
    }
    if target < count {
        return Err(ResampleError::TargetBelowCount { label: label.into(), target, count });
    }

    let mut rows: Vec<_> = ds.iter().cloned().collect();
    let mut rng = rng::class_rng(seed, label);
    for _ in count..target {
        let pick = class_rows[rng.gen_range(0..count)];
        rows.push(ds.examples()[pick].clone());
    }
    Ok(Dataset::new(rows))
}

/// Shrinks one class to exactly `target` rows by keeping a random subset
/// drawn without replacement. Surviving rows keep their original order;
/// other classes are untouched.
pub fn undersample_class(
    ds: &Dataset,
    label: &str,
    target: usize,
    seed: u64,
) -> Result<Dataset, ResampleError> {
    let mut class_rows: Vec<usize> = class_indices(ds, label);
    let count = class_rows.len();
    if count == 0 {
        return Err(ResampleError::UnknownLabel(label.into()));
    }
    if target < 1 || target > count {
        return Err(ResampleError::TargetOutOfRange { label: label.into(), target, count });
    }

    let mut rng = rng::class_rng(seed, label);
    class_rows.shuffle(&mut rng);
    let keep: BTreeSet<usize> = class_rows[..target].iter().copied().collect();
    let rows: Vec<_> = ds
        .iter()
        .enumerate()
        .filter(|(i, ex)| ex.label != label || keep.contains(i))
        .map(|(_, ex)| ex.clone())
        .collect();
    Ok(Dataset::new(rows))
}

/// Hybrid resampling: drop classes below `filter`, then level every survivor
/// to exactly `sample` rows by replicate-shuffle-truncate.
///
/// The output concatenates surviving classes in ascending label order. Each
/// class shuffles with its own seed-derived generator stream, so one class's
/// rows never depend on which other classes survived.
pub fn middlesample(ds: &Dataset, params: &MiddleSampleParams) -> Result<Dataset, ResampleError> {
    if params.sample < 1 {
        return Err(ResampleError::InvalidSample);
    }
    let kept = filter_classes(ds, params.filter);
    let dist = kept.class_distribution();
    if dist.total() == 0 {
        return Err(ResampleError::NoSurvivingClass { filter: params.filter });
    }

    let mut out = Vec::with_capacity(dist.class_count() * params.sample);
    for label in dist.labels() {
        let rows: Vec<_> = kept.iter().filter(|ex| ex.label == label).collect();
        let factor = replication_factor(params.sample, rows.len());
        let mut candidates: Vec<_> = Vec::with_capacity(factor * rows.len());
        for row in &rows {
            for _ in 0..factor {
                candidates.push((*row).clone());
            }
        }
        let mut rng = rng::class_rng(params.seed, label);
        candidates.shuffle(&mut rng);
        candidates.truncate(params.sample);
        out.extend(candidates);
    }
    Ok(Dataset::new(out))
}

fn class_indices(ds: &Dataset, label: &str) -> Vec<usize> {
    ds.iter()
        .enumerate()
        .filter(|(_, ex)| ex.label == label)
        .map(|(i, _)| i)
        .collect()
}
