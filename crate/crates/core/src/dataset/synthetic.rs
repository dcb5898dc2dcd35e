//! Seeded generator for long-tail text corpora.
//!
//! Each class draws sentence tokens from a class-private vocabulary blended
//! with one shared vocabulary. The blend ratio (`overlap`) tunes class
//! separability: 0 gives fully disjoint vocabularies, 1 makes every class
//! draw from the same pool.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use rand::Rng;

use super::{Dataset, DatasetError, LabeledExample};
use crate::rng::{self, stream};

/// Generation parameters for one class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSpec {
    pub label: String,
    pub count: usize,
    pub vocab_size: usize,
    /// Probability that a token is drawn from the shared vocabulary.
    pub overlap: f64,
}

/// Generates a corpus with exactly `spec[i].count` rows per class, in spec
/// order. Each class uses its own seed-derived generator stream, so the rows
/// of one class do not depend on which other classes are listed.
///
/// The shared vocabulary is as large as the largest class vocabulary.
pub fn generate_synthetic(
    specs: &[ClassSpec],
    sentence_len: (usize, usize),
    seed: u64,
) -> Result<Dataset, DatasetError> {
    if specs.is_empty() {
        return Err(DatasetError::EmptySpec);
    }
    let (min_len, max_len) = sentence_len;
    if min_len < 1 || min_len > max_len {
        return Err(DatasetError::InvalidLengthRange { min: min_len, max: max_len });
    }
    for (i, spec) in specs.iter().enumerate() {
        if spec.label.is_empty() {
            return Err(DatasetError::EmptyLabel);
        }
        if spec.count < 1 {
            return Err(DatasetError::InvalidClassSpec {
                label: spec.label.clone(),
                reason: "count must be at least 1",
            });
        }
        if spec.vocab_size < 1 {
            return Err(DatasetError::InvalidClassSpec {
                label: spec.label.clone(),
                reason: "vocabulary size must be at least 1",
            });
        }
        if !(spec.overlap >= 0.0 && spec.overlap <= 1.0) {
            return Err(DatasetError::InvalidClassSpec {
                label: spec.label.clone(),
                reason: "overlap must be within [0, 1]",
            });
        }
        if specs[..i].iter().any(|other| other.label == spec.label) {
            return Err(DatasetError::DuplicateLabel(spec.label.clone()));
        }
    }

    let shared_size = specs.iter().map(|s| s.vocab_size).max().unwrap_or(1);
    let gen_seed = rng::derive(seed, stream::GENERATE);

    let mut examples = Vec::new();
    for spec in specs {
        let mut class_rng = rng::class_rng(gen_seed, &spec.label);
        for _ in 0..spec.count {
            let len = class_rng.gen_range(min_len..=max_len);
            let mut occurrence = String::new();
            for pos in 0..len {
                if pos > 0 {
                    occurrence.push(' ');
                }
                let from_shared: f64 = class_rng.gen();
                if from_shared < spec.overlap {
                    let t = class_rng.gen_range(0..shared_size);
                    occurrence.push_str(&format!("s{t}"));
                } else {
                    // Private tokens embed the label so that a class keeps
                    // the same rows regardless of its roster position. Use
                    // lowercase alphanumeric labels if downstream
                    // tokenization folds case or splits on punctuation.
                    let t = class_rng.gen_range(0..spec.vocab_size);
                    occurrence.push_str(&format!("{}w{t}", spec.label));
                }
            }
            examples.push(LabeledExample { label: spec.label.clone(), occurrence });
        }
    }
    Ok(Dataset::new(examples))
}

/// Class sizes for a long-tail corpus: `classes − 1` minority counts spaced
/// geometrically from `min_minority` up to `max_minority`, then one majority
/// class of `majority` rows.
pub fn long_tail_counts(
    classes: usize,
    min_minority: usize,
    max_minority: usize,
    majority: usize,
) -> Vec<usize> {
    let minorities = classes.saturating_sub(1);
    let mut counts = Vec::with_capacity(classes);
    for i in 0..minorities {
        let count = if minorities == 1 || min_minority == max_minority {
            max_minority
        } else {
            let t = i as f64 / (minorities - 1) as f64;
            let ratio = max_minority as f64 / min_minority as f64;
            libm::round(min_minority as f64 * libm::pow(ratio, t)) as usize
        };
        counts.push(count);
    }
    counts.push(majority);
    counts
}

/// Builds the full spec list for [`generate_synthetic`] from
/// [`long_tail_counts`], labeling classes `c01`, `c02`, … in ascending count
/// order (majority last). Every class shares one vocabulary size and overlap.
pub fn long_tail_spec(
    classes: usize,
    min_minority: usize,
    max_minority: usize,
    majority: usize,
    vocab_size: usize,
    overlap: f64,
) -> Vec<ClassSpec> {
    let width = {
        let mut digits = 1;
        let mut rest = classes;
        while rest >= 10 {
            digits += 1;
            rest /= 10;
        }
        digits
    };
    long_tail_counts(classes, min_minority, max_minority, majority)
        .into_iter()
        .enumerate()
        .map(|(i, count)| ClassSpec {
            label: format!("c{:0width$}", i + 1, width = width),
            count,
            vocab_size,
            overlap,
        })
        .collect()
}
