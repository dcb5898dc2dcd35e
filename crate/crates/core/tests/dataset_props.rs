//! Property tests for dataset bookkeeping and stratified splitting.

use proptest::prelude::*;
use rebalance_core::dataset::{stratified_split, stratified_split_indices, Dataset, LabeledExample};

const LABELS: [&str; 4] = ["ant", "bee", "cat", "dog"];

fn corpus(counts: &[usize]) -> Dataset {
    let mut rows = Vec::new();
    for (ci, &count) in counts.iter().enumerate() {
        for i in 0..count {
            rows.push(LabeledExample {
                label: LABELS[ci].to_string(),
                occurrence: format!("{}r{i}", LABELS[ci]),
            });
        }
    }
    rows.into_iter().collect()
}

fn sorted_rows(ds: &Dataset) -> Vec<(String, String)> {
    let mut rows: Vec<(String, String)> =
        ds.iter().map(|e| (e.label.clone(), e.occurrence.clone())).collect();
    rows.sort();
    rows
}

proptest! {
    #[test]
    fn distribution_total_counts_every_row(counts in prop::collection::vec(0usize..25, 1..=4)) {
        let ds = corpus(&counts);
        let dist = ds.class_distribution();
        prop_assert_eq!(dist.total(), ds.len());
        prop_assert_eq!(dist.class_count(), counts.iter().filter(|&&c| c > 0).count());
    }

    #[test]
    fn split_preserves_the_row_multiset(
        counts in prop::collection::vec(1usize..25, 1..=4),
        fraction in 0.05f64..0.95,
        seed in any::<u64>(),
    ) {
        let ds = corpus(&counts);
        let (train, test) = stratified_split(&ds, fraction, seed).unwrap();

        let mut recombined: Vec<(String, String)> = sorted_rows(&train);
        recombined.extend(sorted_rows(&test));
        recombined.sort();
        prop_assert_eq!(recombined, sorted_rows(&ds));
    }

    #[test]
    fn split_takes_the_expected_share_of_every_class(
        counts in prop::collection::vec(1usize..25, 1..=4),
        fraction in 0.05f64..0.95,
        seed in any::<u64>(),
    ) {
        let ds = corpus(&counts);
        let (train, test) = stratified_split(&ds, fraction, seed).unwrap();
        let train_dist = train.class_distribution();
        let test_dist = test.class_distribution();

        for (ci, &count) in counts.iter().enumerate() {
            let expected_train = if count == 1 {
                1
            } else {
                ((count as f64 * fraction) as usize).clamp(1, count - 1)
            };
            prop_assert_eq!(train_dist.count(LABELS[ci]), expected_train);
            prop_assert_eq!(test_dist.count(LABELS[ci]), count - expected_train);
        }
    }

    #[test]
    fn split_indices_partition_the_dataset(
        counts in prop::collection::vec(1usize..25, 1..=4),
        fraction in 0.05f64..0.95,
        seed in any::<u64>(),
    ) {
        let ds = corpus(&counts);
        let (train_idx, test_idx) = stratified_split_indices(&ds, fraction, seed).unwrap();

        let mut all: Vec<usize> = train_idx.iter().chain(&test_idx).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..ds.len()).collect::<Vec<_>>());

        // The index form and the dataset form must agree row for row.
        let (train, test) = stratified_split(&ds, fraction, seed).unwrap();
        prop_assert_eq!(ds.subset(&train_idx), train);
        prop_assert_eq!(ds.subset(&test_idx), test);
    }

    #[test]
    fn split_is_deterministic_per_seed(
        counts in prop::collection::vec(1usize..25, 1..=4),
        fraction in 0.05f64..0.95,
        seed in any::<u64>(),
    ) {
        let ds = corpus(&counts);
        prop_assert_eq!(
            stratified_split(&ds, fraction, seed).unwrap(),
            stratified_split(&ds, fraction, seed).unwrap()
        );
    }
}
