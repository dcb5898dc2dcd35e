//! Versioned, line-based model files.
//!
//! After the usual `#` comment header, the payload starts with a magic line
//! `rebalance-model v1 <kind>` where `<kind>` is a classifier name. Labels and
//! vocabulary tokens are one per line with `\\`, `\n`, `\r` escaped so any
//! string survives; floats are written with `Display`, which round-trips f64
//! exactly on parse.

use std::path::Path;

use rebalance_core::costsensitive::MlpModel;
use rebalance_core::experiment::{Classifier, TrainedClassifier};
use rebalance_core::nbayes::{NaiveBayesModel, Vocabulary};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

const MODEL_MAGIC: &str = "rebalance-model v1";

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            other => out.push(other),
        }
    }
    out
}

fn unescape(s: &str) -> Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            other => return Err(format!("bad escape `\\{}`", other.unwrap_or(' '))),
        }
    }
    Ok(out)
}

pub fn save_model(path: &Path, trained: &TrainedClassifier, config: &RunConfig) -> CliResult<()> {
    let mut out = config.header()?;
    out.push_str(MODEL_MAGIC);
    out.push(' ');
    out.push_str(trained.kind().as_str());
    out.push('\n');
    match trained {
        TrainedClassifier::NaiveBayes(model) => write_nb(&mut out, model),
        TrainedClassifier::Network { model, vocabulary, .. } => {
            write_network(&mut out, model, vocabulary)
        }
    }
    std::fs::write(path, out)
        .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    Ok(())
}

fn write_lines(out: &mut String, key: &str, items: &[String]) {
    out.push_str(&format!("{key} {}\n", items.len()));
    for item in items {
        out.push_str(&escape(item));
        out.push('\n');
    }
}

fn write_floats(out: &mut String, values: &[f64]) {
    let mut first = true;
    for v in values {
        if !first {
            out.push(' ');
        }
        out.push_str(&format!("{v}"));
        first = false;
    }
    out.push('\n');
}

fn write_nb(out: &mut String, model: &NaiveBayesModel) {
    write_lines(out, "classes", model.labels());
    out.push_str(&format!("alpha {}\n", model.alpha()));
    write_lines(out, "vocabulary", model.vocabulary().tokens());
    out.push_str("priors\n");
    write_floats(out, model.log_priors());
    out.push_str("likelihoods\n");
    for row in model.log_likelihoods() {
        write_floats(out, row);
    }
}

fn write_network(out: &mut String, model: &MlpModel, vocabulary: &Vocabulary) {
    write_lines(out, "classes", model.labels());
    write_lines(out, "vocabulary", vocabulary.tokens());
    out.push_str(&format!("hidden {}\n", model.hidden_units()));
    out.push_str("parameters\n");
    write_floats(out, &model.parameters());
}

/// One-pass reader over the payload lines with contextual error messages.
struct Lines<'a> {
    iter: std::str::Lines<'a>,
    fail: &'a dyn Fn(String) -> CliError,
}

impl<'a> Lines<'a> {
    fn next(&mut self, what: &str) -> CliResult<&'a str> {
        self.iter
            .next()
            .ok_or_else(|| (self.fail)(format!("file ends before {what}")))
    }

    /// Reads a `<key> <count>` line and then `count` escaped string lines.
    fn string_block(&mut self, key: &str) -> CliResult<Vec<String>> {
        let head = self.next(key)?;
        let count: usize = head
            .strip_prefix(key)
            .and_then(|rest| rest.trim().parse().ok())
            .ok_or_else(|| (self.fail)(format!("expected `{key} <count>`, found `{head}`")))?;
        (0..count)
            .map(|i| {
                let line = self.next(&format!("{key} entry {}", i + 1))?;
                unescape(line).map_err(|why| (self.fail)(why))
            })
            .collect()
    }

    /// Reads one line of space-separated floats, checking the expected count.
    fn float_row(&mut self, what: &str, expected: usize) -> CliResult<Vec<f64>> {
        let line = self.next(what)?;
        let values: Vec<f64> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse()
                    .map_err(|_| (self.fail)(format!("`{tok}` in {what} is not a number")))
            })
            .collect::<CliResult<_>>()?;
        if values.len() != expected {
            return Err((self.fail)(format!(
                "{what} has {} values, expected {expected}",
                values.len()
            )));
        }
        Ok(values)
    }

    /// Reads a bare `<key>` marker line.
    fn marker(&mut self, key: &str) -> CliResult<()> {
        let line = self.next(key)?;
        if line.trim() != key {
            return Err((self.fail)(format!("expected `{key}`, found `{line}`")));
        }
        Ok(())
    }
}

pub fn load_model(path: &Path) -> CliResult<TrainedClassifier> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    let shown = path.display().to_string();
    let fail = move |why: String| CliError::runtime(format!("{shown}: {why}"));

    let mut iter = text.lines();
    let magic = loop {
        match iter.next() {
            Some(line) if line.trim().is_empty() || line.starts_with('#') => continue,
            Some(line) => break line,
            None => return Err(fail("empty model file".into())),
        }
    };
    let kind_name = magic
        .strip_prefix(MODEL_MAGIC)
        .map(str::trim)
        .ok_or_else(|| fail(format!("not a `{MODEL_MAGIC}` file")))?;
    let kind = Classifier::parse(kind_name)
        .ok_or_else(|| fail(format!("unknown classifier kind `{kind_name}`")))?;

    let mut lines = Lines { iter, fail: &fail };
    match kind {
        Classifier::NaiveBayes => {
            let labels = lines.string_block("classes")?;
            let alpha_line = lines.next("alpha")?;
            let alpha: f64 = alpha_line
                .strip_prefix("alpha")
                .and_then(|rest| rest.trim().parse().ok())
                .ok_or_else(|| fail(format!("expected `alpha <value>`, found `{alpha_line}`")))?;
            let vocabulary = Vocabulary::from_tokens(lines.string_block("vocabulary")?);
            lines.marker("priors")?;
            let log_priors = lines.float_row("priors", labels.len())?;
            lines.marker("likelihoods")?;
            let log_likelihoods = (0..labels.len())
                .map(|i| lines.float_row(&format!("likelihood row {}", i + 1), vocabulary.len()))
                .collect::<CliResult<Vec<_>>>()?;
            let model =
                NaiveBayesModel::from_parts(labels, vocabulary, alpha, log_priors, log_likelihoods)
                    .map_err(|e| fail(e.to_string()))?;
            Ok(TrainedClassifier::NaiveBayes(model))
        }
        Classifier::Mlp | Classifier::MlpCostSensitive => {
            let labels = lines.string_block("classes")?;
            let vocabulary = Vocabulary::from_tokens(lines.string_block("vocabulary")?);
            let hidden_line = lines.next("hidden")?;
            let hidden: usize = hidden_line
                .strip_prefix("hidden")
                .and_then(|rest| rest.trim().parse().ok())
                .ok_or_else(|| fail(format!("expected `hidden <units>`, found `{hidden_line}`")))?;
            lines.marker("parameters")?;
            let k = labels.len();
            let expected = hidden * vocabulary.len() + hidden + k * hidden + k;
            let params = lines.float_row("parameters", expected)?;
            let model = MlpModel::from_parts(labels, vocabulary.len(), hidden, params)
                .map_err(|e| fail(e.to_string()))?;
            Ok(TrainedClassifier::Network {
                model,
                vocabulary,
                cost_sensitive: kind == Classifier::MlpCostSensitive,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escaping_round_trips_awkward_strings() {
        for s in ["plain", "back\\slash", "new\nline", "caret\rreturn", "\\n literal"] {
            assert_eq!(unescape(&escape(s)).unwrap(), s);
        }
        assert!(!escape("new\nline").contains('\n'));
    }
}
