//! `generate`: synthetic long-tail corpus → dataset CSV.

use rebalance_core::dataset::{generate_synthetic, long_tail_spec};

use super::{merger_for, path_string};
use crate::args::GenerateArgs;
use crate::config::RunConfig;
use crate::data_io::save_dataset;
use crate::error::CliResult;

/// Default corpus shape: one majority class of 1190 rows over a geometric
/// tail of 13 minorities between 12 and 200 rows, moderately overlapping
/// vocabularies so classifiers are neither perfect nor hopeless.
pub const DEFAULT_CLASSES: usize = 14;
pub const DEFAULT_MIN_MINORITY: usize = 12;
pub const DEFAULT_MAX_MINORITY: usize = 200;
pub const DEFAULT_MAJORITY: usize = 1190;
pub const DEFAULT_VOCAB: usize = 60;
pub const DEFAULT_OVERLAP: f64 = 0.65;
pub const DEFAULT_MIN_LEN: usize = 3;
pub const DEFAULT_MAX_LEN: usize = 8;
pub const DEFAULT_SEED: u64 = 42;

pub fn run(args: GenerateArgs) -> CliResult<()> {
    let mut merger = merger_for(&args.config, "generate")?;
    let out = merger.required("out", args.out)?;
    let classes = merger.value("classes", args.classes, DEFAULT_CLASSES)?;
    let min_minority = merger.value("min-minority", args.min_minority, DEFAULT_MIN_MINORITY)?;
    let max_minority = merger.value("max-minority", args.max_minority, DEFAULT_MAX_MINORITY)?;
    let majority = merger.value("majority", args.majority, DEFAULT_MAJORITY)?;
    let vocab = merger.value("vocab", args.vocab, DEFAULT_VOCAB)?;
    let overlap = merger.value("overlap", args.overlap, DEFAULT_OVERLAP)?;
    let min_len = merger.value("min-len", args.min_len, DEFAULT_MIN_LEN)?;
    let max_len = merger.value("max-len", args.max_len, DEFAULT_MAX_LEN)?;
    let seed = merger.value("seed", args.seed, DEFAULT_SEED)?;
    merger.finish()?;

    let mut config = RunConfig::new("generate");
    config.push("out", path_string(&out));
    config.push("classes", classes);
    config.push("min-minority", min_minority);
    config.push("max-minority", max_minority);
    config.push("majority", majority);
    config.push("vocab", vocab);
    config.push("overlap", overlap);
    config.push("min-len", min_len);
    config.push("max-len", max_len);
    config.push("seed", seed);

    let specs = long_tail_spec(classes, min_minority, max_minority, majority, vocab, overlap);
    let ds = generate_synthetic(&specs, (min_len, max_len), seed)?;
    save_dataset(&out, &ds, &config)?;

    println!("wrote {} rows across {} classes to {}", ds.len(), classes, out.display());
    Ok(())
}
