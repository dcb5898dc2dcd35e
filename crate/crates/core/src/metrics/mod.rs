//! Confusion matrices and the error-rate / accuracy / precision / recall
//! family.
//!
//! Counts stay integers and every metric is an exact [`Ratio`]; callers
//! convert to floating point only when reporting. Metrics with an empty
//! denominator (a class never predicted, or absent from the test set) are
//! explicitly `None` rather than a silent 0 or 1.

pub mod report;

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricsError {
    #[error("matrix has no observations")]
    EmptyMatrix,
    #[error("label list is empty")]
    NoLabels,
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("label {0} is not in the matrix")]
    UnknownLabel(String),
    #[error("class index {index} out of range for {classes} classes")]
    IndexOutOfRange { index: usize, classes: usize },
    #[error("expected a {classes}×{classes} grid, got a row of length {got}")]
    ShapeMismatch { classes: usize, got: usize },
    #[error("recall undefined for classes with no test rows: {}", labels.join(", "))]
    UndefinedRecall { labels: Vec<String> },
}

/// An exact non-negative rational. Equality compares values, not
/// representations: 2/4 equals 1/2.
#[derive(Debug, Clone, Copy)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    /// `den` must be nonzero.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "ratio denominator must be nonzero");
        Self { num, den }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Exact sum of two ratios.
    pub fn plus(&self, other: &Ratio) -> Ratio {
        let num = self.num as u128 * other.den as u128 + other.num as u128 * self.den as u128;
        let den = self.den as u128 * other.den as u128;
        let g = gcd(num, den);
        Ratio { num: (num / g) as u64, den: (den / g) as u64 }
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.num as u128 * other.den as u128 == other.num as u128 * self.den as u128
    }
}

impl Eq for Ratio {}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Per-class decomposition of a confusion matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassCounts {
    pub true_pos: u64,
    pub true_neg: u64,
    pub false_pos: u64,
    pub false_neg: u64,
}

impl ClassCounts {
    pub fn total(&self) -> u64 {
        self.true_pos + self.true_neg + self.false_pos + self.false_neg
    }
}

/// A k×k grid of actual-vs-predicted counts. Rows are actual classes,
/// columns predicted classes, both in the order of `labels`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    labels: Vec<String>,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    /// Counts one cell per `(actual, predicted)` pair. Every label in the
    /// pairs must appear in `labels`; the label order fixes the row/column
    /// order.
    pub fn from_pairs(pairs: &[(&str, &str)], labels: &[&str]) -> Result<Self, MetricsError> {
        let owned: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
        validate_labels(&owned)?;
        let k = owned.len();
        let mut counts = vec![0u64; k * k];
        for (actual, predicted) in pairs {
            let i = index_of(&owned, actual)?;
            let j = index_of(&owned, predicted)?;
            counts[i * k + j] += 1;
        }
        Ok(Self { labels: owned, counts })
    }

    /// Wraps a pre-counted grid; `rows[i][j]` is actual class i predicted as
    /// class j.
    pub fn from_counts(labels: &[&str], rows: &[Vec<u64>]) -> Result<Self, MetricsError> {
        let owned: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
        validate_labels(&owned)?;
        let k = owned.len();
        if rows.len() != k {
            return Err(MetricsError::ShapeMismatch { classes: k, got: rows.len() });
        }
        let mut counts = Vec::with_capacity(k * k);
        for row in rows {
            if row.len() != k {
                return Err(MetricsError::ShapeMismatch { classes: k, got: row.len() });
            }
            counts.extend_from_slice(row);
        }
        Ok(Self { labels: owned, counts })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Number of classes.
    pub fn k(&self) -> usize {
        self.labels.len()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn count(&self, actual: usize, predicted: usize) -> u64 {
        self.counts[actual * self.k() + predicted]
    }

    pub fn row_total(&self, actual: usize) -> u64 {
        let k = self.k();
        self.counts[actual * k..(actual + 1) * k].iter().sum()
    }

    pub fn column_total(&self, predicted: usize) -> u64 {
        let k = self.k();
        (0..k).map(|i| self.counts[i * k + predicted]).sum()
    }

    pub fn diagonal_total(&self) -> u64 {
        let k = self.k();
        (0..k).map(|i| self.counts[i * k + i]).sum()
    }

    pub fn grand_total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// TP/TN/FP/FN for one class: the diagonal cell, the grid outside the
    /// class's row and column, the column remainder, and the row remainder.
    pub fn class_counts(&self, class_index: usize) -> Result<ClassCounts, MetricsError> {
        self.check_index(class_index)?;
        let tp = self.count(class_index, class_index);
        let fp = self.column_total(class_index) - tp;
        let false_neg = self.row_total(class_index) - tp;
        let tn = self.grand_total() - tp - fp - false_neg;
        Ok(ClassCounts { true_pos: tp, true_neg: tn, false_pos: fp, false_neg })
    }

    /// Correct predictions over all predictions.
    pub fn accuracy(&self) -> Result<Ratio, MetricsError> {
        let total = self.grand_total();
        if total == 0 {
            return Err(MetricsError::EmptyMatrix);
        }
        Ok(Ratio::new(self.diagonal_total(), total))
    }

    /// Share of wrong predictions; always the exact complement of
    /// [`accuracy`](Self::accuracy).
    pub fn error_rate(&self) -> Result<Ratio, MetricsError> {
        let total = self.grand_total();
        if total == 0 {
            return Err(MetricsError::EmptyMatrix);
        }
        Ok(Ratio::new(total - self.diagonal_total(), total))
    }

    /// TP / (TP + FP); `None` when the class was never predicted.
    pub fn precision(&self, class_index: usize) -> Result<Option<Ratio>, MetricsError> {
        self.check_index(class_index)?;
        let col = self.column_total(class_index);
        if col == 0 {
            return Ok(None);
        }
        Ok(Some(Ratio::new(self.count(class_index, class_index), col)))
    }

    /// TP / (TP + FN); `None` when the class has no test rows.
    pub fn recall(&self, class_index: usize) -> Result<Option<Ratio>, MetricsError> {
        self.check_index(class_index)?;
        let row = self.row_total(class_index);
        if row == 0 {
            return Ok(None);
        }
        Ok(Some(Ratio::new(self.count(class_index, class_index), row)))
    }

    /// Unweighted mean of per-class recalls. Fails listing the offending
    /// classes if any recall is undefined.
    pub fn macro_recall(&self) -> Result<f64, MetricsError> {
        let undefined: Vec<String> = (0..self.k())
            .filter(|&i| self.row_total(i) == 0)
            .map(|i| self.labels[i].clone())
            .collect();
        if !undefined.is_empty() {
            return Err(MetricsError::UndefinedRecall { labels: undefined });
        }
        let sum: f64 = (0..self.k())
            .map(|i| Ratio::new(self.count(i, i), self.row_total(i)).value())
            .sum();
        Ok(sum / self.k() as f64)
    }

    fn check_index(&self, index: usize) -> Result<(), MetricsError> {
        if index >= self.k() {
            return Err(MetricsError::IndexOutOfRange { index, classes: self.k() });
        }
        Ok(())
    }
}

fn validate_labels(labels: &[String]) -> Result<(), MetricsError> {
    if labels.is_empty() {
        return Err(MetricsError::NoLabels);
    }
    for (i, label) in labels.iter().enumerate() {
        if labels[..i].contains(label) {
            return Err(MetricsError::DuplicateLabel(label.clone()));
        }
    }
    Ok(())
}

fn index_of(labels: &[String], label: &str) -> Result<usize, MetricsError> {
    labels
        .iter()
        .position(|l| l == label)
        .ok_or_else(|| MetricsError::UnknownLabel(label.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_compares_by_value() {
        assert_eq!(Ratio::new(1, 2), Ratio::new(2, 4));
        assert_ne!(Ratio::new(1, 2), Ratio::new(2, 3));
        assert!(Ratio::new(5, 5).is_one());
        assert_eq!(Ratio::new(1, 3).plus(&Ratio::new(2, 3)), Ratio::new(1, 1));
        assert_eq!(Ratio::new(1, 4).plus(&Ratio::new(1, 6)), Ratio::new(5, 12));
    }

    #[test]
    fn from_pairs_counts_cells() {
        let m = ConfusionMatrix::from_pairs(&[("a", "a"), ("a", "b"), ("b", "b")], &["a", "b"])
            .unwrap();
        assert_eq!(m.count(0, 0), 1);
        assert_eq!(m.count(0, 1), 1);
        assert_eq!(m.count(1, 0), 0);
        assert_eq!(m.count(1, 1), 1);
        assert_eq!(m.grand_total(), 3);
    }

    #[test]
    fn from_pairs_rejects_unknown_and_duplicate_labels() {
        assert_eq!(
            ConfusionMatrix::from_pairs(&[("a", "x")], &["a", "b"]),
            Err(MetricsError::UnknownLabel("x".into()))
        );
        assert_eq!(
            ConfusionMatrix::from_pairs(&[], &["a", "a"]),
            Err(MetricsError::DuplicateLabel("a".into()))
        );
        assert_eq!(ConfusionMatrix::from_pairs(&[], &[]), Err(MetricsError::NoLabels));
    }

    #[test]
    fn from_counts_validates_shape() {
        assert!(ConfusionMatrix::from_counts(&["a", "b"], &[vec![1, 2], vec![3, 4]]).is_ok());
        assert!(matches!(
            ConfusionMatrix::from_counts(&["a", "b"], &[vec![1, 2]]),
            Err(MetricsError::ShapeMismatch { .. })
        ));
        assert!(matches!(
            ConfusionMatrix::from_counts(&["a", "b"], &[vec![1, 2], vec![3]]),
            Err(MetricsError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn all_correct_pairs_give_a_diagonal_matrix() {
        let m = ConfusionMatrix::from_pairs(&[("a", "a"), ("b", "b"), ("b", "b")], &["a", "b"])
            .unwrap();
        assert_eq!(m.diagonal_total(), m.grand_total());
        assert!(m.accuracy().unwrap().is_one());
        assert_eq!(m.error_rate().unwrap(), Ratio::new(0, 3));
        assert_eq!(m.macro_recall().unwrap(), 1.0);
    }

    #[test]
    fn single_class_matrix_has_trivial_counts() {
        let m = ConfusionMatrix::from_counts(&["only"], &[vec![7]]).unwrap();
        let c = m.class_counts(0).unwrap();
        assert_eq!(c.true_pos, 7);
        assert_eq!(c.true_neg, 0);
        assert_eq!(c.false_pos, 0);
        assert_eq!(c.false_neg, 0);
    }

    #[test]
    fn class_counts_partition_the_grid() {
        let m = ConfusionMatrix::from_counts(
            &["a", "b", "c"],
            &[vec![5, 1, 0], vec![2, 7, 1], vec![0, 3, 4]],
        )
        .unwrap();
        for i in 0..3 {
            let c = m.class_counts(i).unwrap();
            assert_eq!(c.total(), m.grand_total());
        }
        let b = m.class_counts(1).unwrap();
        assert_eq!(b.true_pos, 7);
        assert_eq!(b.false_pos, 1 + 3);
        assert_eq!(b.false_neg, 2 + 1);
        assert_eq!(b.true_neg, 5 + 0 + 0 + 4);
    }

    #[test]
    fn accuracy_and_error_rate_are_exact_complements() {
        let m = ConfusionMatrix::from_counts(&["a", "b"], &[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(m.accuracy().unwrap(), Ratio::new(5, 10));
        assert_eq!(m.error_rate().unwrap(), Ratio::new(5, 10));
        assert!(m.accuracy().unwrap().plus(&m.error_rate().unwrap()).is_one());
    }

    #[test]
    fn empty_matrix_rejects_rate_metrics() {
        let m = ConfusionMatrix::from_counts(&["a"], &[vec![0]]).unwrap();
        assert_eq!(m.accuracy(), Err(MetricsError::EmptyMatrix));
        assert_eq!(m.error_rate(), Err(MetricsError::EmptyMatrix));
    }

    #[test]
    fn undefined_precision_and_recall_are_flagged() {
        // Class b never predicted; class c never present.
        let m = ConfusionMatrix::from_counts(
            &["a", "b", "c"],
            &[vec![2, 0, 1], vec![3, 0, 0], vec![0, 0, 0]],
        )
        .unwrap();
        assert_eq!(m.precision(1).unwrap(), None);
        assert_eq!(m.recall(2).unwrap(), None);
        assert_eq!(m.recall(1).unwrap(), Some(Ratio::new(0, 3)));
        assert_eq!(
            m.macro_recall(),
            Err(MetricsError::UndefinedRecall { labels: vec!["c".into()] })
        );
    }

    #[test]
    fn index_out_of_range_is_an_error() {
        let m = ConfusionMatrix::from_counts(&["a"], &[vec![1]]).unwrap();
        assert!(matches!(m.precision(1), Err(MetricsError::IndexOutOfRange { .. })));
        assert!(matches!(m.recall(9), Err(MetricsError::IndexOutOfRange { .. })));
        assert!(matches!(m.class_counts(1), Err(MetricsError::IndexOutOfRange { .. })));
    }

    #[test]
    fn label_order_fixes_the_grid_orientation() {
        let pairs = [("a", "b"), ("a", "a"), ("b", "a")];
        let m1 = ConfusionMatrix::from_pairs(&pairs, &["a", "b"]).unwrap();
        let m2 = ConfusionMatrix::from_pairs(&pairs, &["b", "a"]).unwrap();
        assert_eq!(m1.count(0, 1), 1);
        assert_eq!(m2.count(1, 0), 1);
        assert_eq!(m1.accuracy(), m2.accuracy());
        assert_eq!(m1.macro_recall().unwrap(), m2.macro_recall().unwrap());
    }
}
