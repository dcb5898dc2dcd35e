//! Dataset CSV files: header `label,occurrence`, RFC 4180 quoting, and an
//! optional leading `#` comment block.

use std::path::Path;

use rebalance_core::dataset::{Dataset, LabeledExample};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

/// Splits off the leading block of `#` comment and blank lines, returning
/// the remaining text and how many lines were skipped, so error messages
/// can report true file line numbers.
pub fn strip_comment_block(text: &str) -> (&str, u64) {
    let mut offset = 0;
    let mut skipped = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        if trimmed.starts_with('#') || trimmed.is_empty() {
            offset += line.len();
            skipped += 1;
        } else {
            break;
        }
    }
    (&text[offset..], skipped)
}

pub fn load_dataset(path: &Path) -> CliResult<Dataset> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    let (body, skipped) = strip_comment_block(&text);
    let at = |line: u64| format!("{}: line {line}", path.display());

    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    if headers.len() != 2 || &headers[0] != "label" || &headers[1] != "occurrence" {
        return Err(CliError::runtime(format!(
            "{}: expected header `label,occurrence`, found `{}`",
            path.display(),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }

    let mut rows = Vec::new();
    for result in reader.records() {
        let record = result.map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
        let line = record.position().map_or(0, |p| p.line()) + skipped;
        if record.len() != 2 {
            return Err(CliError::runtime(format!(
                "{}: expected 2 fields, found {}",
                at(line),
                record.len()
            )));
        }
        let example = LabeledExample::new(&record[0], &record[1])
            .map_err(|e| CliError::runtime(format!("{}: {e}", at(line))))?;
        rows.push(example);
    }
    Ok(rows.into_iter().collect())
}

pub fn save_dataset(path: &Path, ds: &Dataset, config: &RunConfig) -> CliResult<()> {
    let mut buf: Vec<u8> = config.header()?.into_bytes();
    {
        let mut writer = csv::Writer::from_writer(&mut buf);
        writer
            .write_record(["label", "occurrence"])
            .and_then(|()| {
                ds.iter().try_for_each(|ex| {
                    writer.write_record([ex.label.as_str(), ex.occurrence.as_str()])
                })
            })
            .map_err(|e| CliError::runtime(e.to_string()))?;
        writer.flush()?;
    }
    std::fs::write(path, buf)
        .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    Ok(())
}
