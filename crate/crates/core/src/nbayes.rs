//! Multinomial Naive Bayes for short text: tokenizer, vocabulary,
//! bag-of-words counts, Laplace-smoothed training, and argmax prediction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::Dataset;

/// Default Laplace smoothing constant.
pub const DEFAULT_ALPHA: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NbError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("smoothing constant {0} must be positive and finite")]
    InvalidAlpha(f64),
    #[error("model parts disagree: {0}")]
    MismatchedParts(&'static str),
}

/// Lowercases and splits on everything that is not alphanumeric, dropping
/// empty pieces. Joining the result with spaces and tokenizing again gives
/// the same tokens back.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    // Split decisions look at the lowercased characters: a few uppercase
    // letters lowercase into sequences containing combining marks, and those
    // must break tokens now so re-tokenizing cannot split them differently.
    for lower in text.chars().flat_map(char::to_lowercase) {
        if lower.is_alphanumeric() {
            current.push(lower);
        } else if !current.is_empty() {
            tokens.push(core::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// A sorted token list mapping each token to a dense feature index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
}

impl Vocabulary {
    /// Collects every distinct token of every row.
    pub fn from_dataset(ds: &Dataset) -> Self {
        let set: BTreeSet<String> =
            ds.iter().flat_map(|ex| tokenize(&ex.occurrence)).collect();
        Self { tokens: set.into_iter().collect() }
    }

    /// Rebuilds a vocabulary from a plain token list (sorted, deduplicated).
    pub fn from_tokens(tokens: Vec<String>) -> Self {
        let set: BTreeSet<String> = tokens.into_iter().collect();
        Self { tokens: set.into_iter().collect() }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.tokens.binary_search_by(|t| t.as_str().cmp(token)).ok()
    }

    /// Bag-of-words count vector for one text; unknown tokens are ignored.
    pub fn count_vector(&self, text: &str) -> Vec<f64> {
        let mut counts = vec![0.0; self.tokens.len()];
        for token in tokenize(text) {
            if let Some(i) = self.index_of(&token) {
                counts[i] += 1.0;
            }
        }
        counts
    }
}

/// A trained multinomial Naive Bayes classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveBayesModel {
    labels: Vec<String>,
    vocabulary: Vocabulary,
    alpha: f64,
    log_priors: Vec<f64>,
    log_likelihoods: Vec<Vec<f64>>,
}

/// Estimates priors from class frequencies and per-token likelihoods with
/// Laplace smoothing `alpha`. The vocabulary comes from the training rows
/// only; classes are ordered by ascending label.
pub fn train_nb(train: &Dataset, alpha: f64) -> Result<NaiveBayesModel, NbError> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(NbError::InvalidAlpha(alpha));
    }
    if train.is_empty() {
        return Err(NbError::EmptyTrainingSet);
    }

    let dist = train.class_distribution();
    let labels: Vec<String> = dist.labels().map(String::from).collect();
    let class_index: BTreeMap<&str, usize> =
        labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let vocabulary = Vocabulary::from_dataset(train);
    let k = labels.len();
    let v = vocabulary.len();

    let mut token_counts = vec![vec![0u64; v]; k];
    let mut class_token_totals = vec![0u64; k];
    for ex in train {
        let c = class_index[ex.label.as_str()];
        for token in tokenize(&ex.occurrence) {
            let j = vocabulary.index_of(&token).expect("training token must be in vocabulary");
            token_counts[c][j] += 1;
            class_token_totals[c] += 1;
        }
    }

    let total = dist.total() as f64;
    let log_priors: Vec<f64> =
        labels.iter().map(|l| libm::log(dist.count(l) as f64 / total)).collect();

    let log_likelihoods: Vec<Vec<f64>> = (0..k)
        .map(|c| {
            let denominator = class_token_totals[c] as f64 + alpha * v as f64;
            token_counts[c]
                .iter()
                .map(|&n| libm::log((n as f64 + alpha) / denominator))
                .collect()
        })
        .collect();

    Ok(NaiveBayesModel { labels, vocabulary, alpha, log_priors, log_likelihoods })
}

impl NaiveBayesModel {
    /// Reassembles a model from serialized parts. The label order is kept
    /// as given because it defines tie-breaking.
    pub fn from_parts(
        labels: Vec<String>,
        vocabulary: Vocabulary,
        alpha: f64,
        log_priors: Vec<f64>,
        log_likelihoods: Vec<Vec<f64>>,
    ) -> Result<Self, NbError> {
        if labels.is_empty() {
            return Err(NbError::MismatchedParts("no labels"));
        }
        if log_priors.len() != labels.len() {
            return Err(NbError::MismatchedParts("prior count differs from label count"));
        }
        if log_likelihoods.len() != labels.len() {
            return Err(NbError::MismatchedParts("likelihood row count differs from label count"));
        }
        if log_likelihoods.iter().any(|row| row.len() != vocabulary.len()) {
            return Err(NbError::MismatchedParts("likelihood row length differs from vocabulary"));
        }
        Ok(Self { labels, vocabulary, alpha, log_priors, log_likelihoods })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn log_priors(&self) -> &[f64] {
        &self.log_priors
    }

    pub fn log_likelihoods(&self) -> &[Vec<f64>] {
        &self.log_likelihoods
    }

    /// Unnormalized log posterior per class: log prior plus the log
    /// likelihood of every in-vocabulary token. Out-of-vocabulary tokens
    /// contribute nothing.
    pub fn log_posteriors(&self, text: &str) -> Vec<f64> {
        let mut scores = self.log_priors.clone();
        for token in tokenize(text) {
            if let Some(j) = self.vocabulary.index_of(&token) {
                for (c, score) in scores.iter_mut().enumerate() {
                    *score += self.log_likelihoods[c][j];
                }
            }
        }
        scores
    }

    /// Class with the highest posterior; on ties the earlier label wins.
    pub fn predict(&self, text: &str) -> &str {
        let scores = self.log_posteriors(text);
        let mut best = 0;
        for (c, score) in scores.iter().enumerate().skip(1) {
            if *score > scores[best] {
                best = c;
            }
        }
        &self.labels[best]
    }
}
