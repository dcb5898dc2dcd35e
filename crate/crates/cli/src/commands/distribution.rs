//! `distribution`: class histogram of a dataset CSV.

use super::{aligned_table, merger_for, path_string};
use crate::args::DistributionArgs;
use crate::config::RunConfig;
use crate::data_io::load_dataset;
use crate::error::{CliError, CliResult};

pub fn run(args: DistributionArgs) -> CliResult<()> {
    let mut merger = merger_for(&args.config, "distribution")?;
    let input = merger.required("input", args.input)?;
    let out = merger.optional("out", args.out)?;
    merger.finish()?;

    let ds = load_dataset(&input)?;
    let dist = ds.class_distribution();

    let mut rows: Vec<Vec<String>> = dist
        .counts()
        .iter()
        .map(|(label, count)| vec![label.clone(), count.to_string()])
        .collect();
    rows.push(vec!["total".into(), dist.total().to_string()]);
    print!("{}", aligned_table(&["label", "count"], &rows));

    if let Some(out) = out {
        let mut config = RunConfig::new("distribution");
        config.push("input", path_string(&input));
        config.push("out", path_string(&out));

        let mut buf = config.header()?.into_bytes();
        {
            let mut writer = csv::Writer::from_writer(&mut buf);
            writer.write_record(["label", "count"]).map_err(|e| CliError::runtime(e.to_string()))?;
            for (label, count) in dist.counts() {
                writer
                    .write_record([label.as_str(), &count.to_string()])
                    .map_err(|e| CliError::runtime(e.to_string()))?;
            }
            writer.flush()?;
        }
        std::fs::write(&out, buf)
            .map_err(|e| CliError::runtime(format!("{}: {e}", out.display())))?;
    }
    Ok(())
}
