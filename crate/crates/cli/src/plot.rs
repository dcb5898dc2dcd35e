//! Gnuplot-compatible whitespace tables of sweep accuracies.
//!
//! Without sample values each line is `filter accuracy` (a line plot).
//! With samples, rows are `filter sample accuracy` grouped into blank-line
//! separated blocks per filter, the layout gnuplot's `splot` expects for a
//! surface. Failed cells are skipped; `#` comment lines are ignored by
//! gnuplot, so the leading config header is harmless.

use std::path::Path;

use rebalance_core::experiment::SweepRecord;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub fn render_plot(records: &[SweepRecord]) -> String {
    let mut out = String::new();
    let has_samples = records.iter().any(|r| r.sample.is_some());
    let mut current_filter: Option<usize> = None;
    for record in records {
        let Some(accuracy) = record.accuracy else { continue };
        if has_samples {
            if current_filter.is_some() && current_filter != Some(record.filter) {
                out.push('\n');
            }
            current_filter = Some(record.filter);
            let sample = record.sample.unwrap_or(0);
            out.push_str(&format!("{} {} {:.6}\n", record.filter, sample, accuracy));
        } else {
            out.push_str(&format!("{} {:.6}\n", record.filter, accuracy));
        }
    }
    out
}

pub fn save_plot(path: &Path, records: &[SweepRecord], config: &RunConfig) -> CliResult<()> {
    let mut out = config.header()?;
    out.push_str(&render_plot(records));
    std::fs::write(path, out)
        .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    Ok(())
}
