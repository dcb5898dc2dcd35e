//! `a:b:step` range syntax for sweep grids.

use crate::error::{CliError, CliResult};

/// Parses either a single value `n` or an inclusive range `a:b:step`.
/// The endpoint `b` is produced exactly when `b − a` is a multiple of
/// `step`; otherwise the range stops at the last value below it.
pub fn parse_range(text: &str) -> CliResult<Vec<usize>> {
    let bad = |why: &str| CliError::usage(format!("invalid range `{text}`: {why}"));

    if !text.contains(':') {
        return text.trim().parse().map(|v| vec![v]).map_err(|_| bad("expected `n` or `a:b:step`"));
    }

    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(bad("expected `a:b:step`"));
    }
    let parse = |p: &str| p.trim().parse::<usize>().map_err(|_| bad("all parts must be integers"));
    let (start, end, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
    if step == 0 {
        return Err(bad("step must be at least 1"));
    }
    if start > end {
        return Err(bad("start exceeds end"));
    }

    Ok((start..=end).step_by(step).collect())
}
