//! Rendering of per-class metric tables as CSV and aligned plain text.
//!
//! CSV output carries six decimals for downstream tooling; the text table
//! rounds to two decimals for reading. Metrics with an empty denominator
//! render as `undefined` in both.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{ConfusionMatrix, MetricsError, Ratio};

/// Per-class table plus summary lines, as CSV. The summary (accuracy,
/// error rate, macro recall) rides in trailing `#` comment lines so the data
/// rows stay uniform.
pub fn csv_report(m: &ConfusionMatrix) -> Result<String, MetricsError> {
    let summary = Summary::compute(m)?;
    let mut out = String::from("label,tp,tn,fp,fn,precision,recall\n");
    for (i, label) in m.labels().iter().enumerate() {
        let c = m.class_counts(i)?;
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            csv_field(label),
            c.true_pos,
            c.true_neg,
            c.false_pos,
            c.false_neg,
            csv_metric(m.precision(i)?),
            csv_metric(m.recall(i)?),
        ));
    }
    out.push_str(&format!("# accuracy={:.6}\n", summary.accuracy));
    out.push_str(&format!("# error_rate={:.6}\n", summary.error_rate));
    match summary.macro_recall {
        Some(v) => out.push_str(&format!("# macro_recall={v:.6}\n")),
        None => out.push_str("# macro_recall=undefined\n"),
    }
    Ok(out)
}

/// Per-class table plus summary lines as an aligned, human-oriented table.
pub fn text_report(m: &ConfusionMatrix) -> Result<String, MetricsError> {
    let summary = Summary::compute(m)?;
    let mut rows: Vec<[String; 7]> = Vec::with_capacity(m.k());
    for (i, label) in m.labels().iter().enumerate() {
        let c = m.class_counts(i)?;
        rows.push([
            label.clone(),
            format!("{}", c.true_pos),
            format!("{}", c.true_neg),
            format!("{}", c.false_pos),
            format!("{}", c.false_neg),
            text_metric(m.precision(i)?),
            text_metric(m.recall(i)?),
        ]);
    }

    let header = ["label", "tp", "tn", "fp", "fn", "precision", "recall"];
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row.iter()) {
            *w = (*w).max(cell.len());
        }
    }

    let mut out = String::new();
    render_row(&mut out, &header.map(String::from), &widths);
    for row in &rows {
        render_row(&mut out, row, &widths);
    }
    out.push('\n');
    out.push_str(&format!("accuracy     {:.2}\n", summary.accuracy));
    out.push_str(&format!("error_rate   {:.2}\n", summary.error_rate));
    match summary.macro_recall {
        Some(v) => out.push_str(&format!("macro_recall {v:.2}\n")),
        None => out.push_str("macro_recall undefined\n"),
    }
    Ok(out)
}

struct Summary {
    accuracy: f64,
    error_rate: f64,
    macro_recall: Option<f64>,
}

impl Summary {
    fn compute(m: &ConfusionMatrix) -> Result<Self, MetricsError> {
        Ok(Self {
            accuracy: m.accuracy()?.value(),
            error_rate: m.error_rate()?.value(),
            macro_recall: match m.macro_recall() {
                Ok(v) => Some(v),
                Err(MetricsError::UndefinedRecall { .. }) => None,
                Err(e) => return Err(e),
            },
        })
    }
}

fn render_row(out: &mut String, cells: &[String; 7], widths: &[usize]) {
    for (i, (cell, width)) in cells.iter().zip(widths).enumerate() {
        if i > 0 {
            out.push_str("  ");
        }
        if i == 0 {
            // Left-align the label column, right-align the numbers.
            out.push_str(&format!("{cell:<width$}"));
        } else {
            out.push_str(&format!("{cell:>width$}"));
        }
    }
    // Trim the padding after the final column.
    while out.ends_with(' ') {
        out.pop();
    }
    out.push('\n');
}

fn csv_metric(value: Option<Ratio>) -> String {
    match value {
        Some(r) => format!("{:.6}", r.value()),
        None => String::from("undefined"),
    }
}

fn text_metric(value: Option<Ratio>) -> String {
    match value {
        Some(r) => format!("{:.2}", r.value()),
        None => String::from("undefined"),
    }
}

/// RFC 4180 quoting: fields with commas, quotes, or line breaks are wrapped
/// in quotes with embedded quotes doubled.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        let mut quoted = String::from("\"");
        for ch in s.chars() {
            if ch == '"' {
                quoted.push('"');
            }
            quoted.push(ch);
        }
        quoted.push('"');
        quoted
    } else {
        String::from(s)
    }
}
