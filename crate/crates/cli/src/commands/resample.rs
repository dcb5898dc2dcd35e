//! `resample`: rebalance a dataset CSV so every surviving class has the
//! same row count.

use rebalance_core::resample::{middlesample, MiddleSampleParams};

use super::{merger_for, path_string};
use crate::args::ResampleArgs;
use crate::config::RunConfig;
use crate::data_io::{load_dataset, save_dataset};
use crate::error::{CliError, CliResult};

pub const DEFAULT_SEED: u64 = 42;

pub fn run(args: ResampleArgs) -> CliResult<()> {
    let mut merger = merger_for(&args.config, "resample")?;
    let input = merger.required("input", args.input)?;
    let out = merger.required("out", args.out)?;
    let filter = merger.value("filter", args.filter, 0usize)?;
    let sample = merger.required("sample", args.sample)?;
    let seed = merger.value("seed", args.seed, DEFAULT_SEED)?;
    merger.finish()?;

    // Inputs are never mutated, so writing over the input is always a
    // mistake. Compare resolved paths too in case one side is a symlink
    // or spelled differently.
    let same_file = input == out
        || match (input.canonicalize(), out.canonicalize()) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        };
    if same_file {
        return Err(CliError::usage("`--out` must differ from `--input`"));
    }

    let mut config = RunConfig::new("resample");
    config.push("input", path_string(&input));
    config.push("out", path_string(&out));
    config.push("filter", filter);
    config.push("sample", sample);
    config.push("seed", seed);

    let ds = load_dataset(&input)?;
    let balanced = middlesample(&ds, &MiddleSampleParams { filter, sample, seed })?;
    save_dataset(&out, &balanced, &config)?;

    let classes = balanced.class_distribution().counts().len();
    println!("wrote {} rows ({} classes x {} rows) to {}", balanced.len(), classes, sample, out.display());
    Ok(())
}
