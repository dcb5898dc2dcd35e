//! Confusion-matrix CSV files: a `label,<class…>` header row, then one row
//! of counts per actual class, in the same class order.

use std::path::Path;

use rebalance_core::metrics::ConfusionMatrix;

use crate::config::RunConfig;
use crate::data_io::strip_comment_block;
use crate::error::{CliError, CliResult};

pub fn save_matrix(path: &Path, matrix: &ConfusionMatrix, config: &RunConfig) -> CliResult<()> {
    let mut buf: Vec<u8> = config.header()?.into_bytes();
    {
        let mut writer = csv::Writer::from_writer(&mut buf);
        let mut header = vec!["label".to_string()];
        header.extend(matrix.labels().iter().cloned());
        writer.write_record(&header).map_err(|e| CliError::runtime(e.to_string()))?;
        for i in 0..matrix.k() {
            let mut row = vec![matrix.labels()[i].clone()];
            row.extend((0..matrix.k()).map(|j| matrix.count(i, j).to_string()));
            writer.write_record(&row).map_err(|e| CliError::runtime(e.to_string()))?;
        }
        writer.flush()?;
    }
    std::fs::write(path, buf)
        .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    Ok(())
}

pub fn load_matrix(path: &Path) -> CliResult<ConfusionMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    let (body, _) = strip_comment_block(&text);
    let fail = |why: String| CliError::runtime(format!("{}: {why}", path.display()));

    let mut reader = csv::ReaderBuilder::new().has_headers(false).from_reader(body.as_bytes());
    let mut records = reader.records();

    let header = records
        .next()
        .ok_or_else(|| fail("empty matrix file".into()))?
        .map_err(|e| fail(e.to_string()))?;
    if header.len() < 2 || &header[0] != "label" {
        return Err(fail("expected a `label,<class…>` header row".into()));
    }
    let labels: Vec<String> = header.iter().skip(1).map(String::from).collect();
    let k = labels.len();

    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(k);
    for (i, result) in records.enumerate() {
        let record = result.map_err(|e| fail(e.to_string()))?;
        if i >= k {
            return Err(fail(format!("more than {k} count rows")));
        }
        if record.len() != k + 1 {
            return Err(fail(format!(
                "row `{}` has {} fields, expected {}",
                &record[0],
                record.len(),
                k + 1
            )));
        }
        if &record[0] != labels[i].as_str() {
            return Err(fail(format!(
                "row order mismatch: expected `{}`, found `{}`",
                labels[i], &record[0]
            )));
        }
        let counts: Vec<u64> = record
            .iter()
            .skip(1)
            .map(|cell| {
                cell.trim()
                    .parse()
                    .map_err(|_| fail(format!("`{cell}` is not a non-negative count")))
            })
            .collect::<CliResult<_>>()?;
        rows.push(counts);
    }
    if rows.len() != k {
        return Err(fail(format!("found {} count rows, expected {k}", rows.len())));
    }

    let label_refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    ConfusionMatrix::from_counts(&label_refs, &rows).map_err(|e| fail(e.to_string()))
}
