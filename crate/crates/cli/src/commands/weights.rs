//! `weights`: complement-ratio class weight table for a dataset CSV.

use rebalance_core::costsensitive::ClassWeights;
use rebalance_core::resample::filter_classes;

use super::{aligned_table, merger_for, path_string};
use crate::args::WeightsArgs;
use crate::config::RunConfig;
use crate::data_io::load_dataset;
use crate::error::{CliError, CliResult};

pub fn run(args: WeightsArgs) -> CliResult<()> {
    let mut merger = merger_for(&args.config, "weights")?;
    let input = merger.required("input", args.input)?;
    let filter = merger.value("filter", args.filter, 0usize)?;
    let out = merger.optional("out", args.out)?;
    merger.finish()?;

    let ds = load_dataset(&input)?;
    let dist = filter_classes(&ds, filter).class_distribution();
    let weights = ClassWeights::from_distribution(&dist)?;

    let rows: Vec<Vec<String>> = weights
        .labels()
        .iter()
        .enumerate()
        .map(|(i, label)| {
            let count = dist.counts()[label];
            vec![label.clone(), count.to_string(), format!("{:.6}", weights.weight(i))]
        })
        .collect();
    print!("{}", aligned_table(&["label", "count", "weight"], &rows));
    let (numerator, denominator) = weights.exact_sum();
    // The weights of k classes always sum to exactly k − 1.
    println!("weight sum: {} (exactly {numerator}/{denominator})", numerator / denominator as u128);

    if let Some(out) = out {
        let mut config = RunConfig::new("weights");
        config.push("input", path_string(&input));
        config.push("filter", filter);
        config.push("out", path_string(&out));

        let mut buf = config.header()?.into_bytes();
        {
            let mut writer = csv::Writer::from_writer(&mut buf);
            writer
                .write_record(["label", "count", "weight"])
                .map_err(|e| CliError::runtime(e.to_string()))?;
            for (i, label) in weights.labels().iter().enumerate() {
                writer
                    .write_record([
                        label.as_str(),
                        &dist.counts()[label].to_string(),
                        &weights.weight(i).to_string(),
                    ])
                    .map_err(|e| CliError::runtime(e.to_string()))?;
            }
            writer.flush()?;
        }
        std::fs::write(&out, buf)
            .map_err(|e| CliError::runtime(format!("{}: {e}", out.display())))?;
    }
    Ok(())
}
