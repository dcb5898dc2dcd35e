//! Reproducibility headers and `--config` files.
//!
//! Every file the tool writes starts with a comment block echoing the fully
//! resolved run parameters. That block is itself valid `--config` input, so
//! any output file doubles as the recipe to reproduce it bit for bit.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

pub const MAGIC: &str = "rebalance-config v1";

/// The resolved run parameters of one invocation, in a fixed key order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    subcommand: &'static str,
    entries: Vec<(&'static str, String)>,
}

impl RunConfig {
    pub fn new(subcommand: &'static str) -> Self {
        Self { subcommand, entries: Vec::new() }
    }

    pub fn push(&mut self, key: &'static str, value: impl Display) {
        self.entries.push((key, value.to_string()));
    }

    pub fn push_opt(&mut self, key: &'static str, value: Option<impl Display>) {
        if let Some(value) = value {
            self.push(key, value);
        }
    }

    pub fn push_flag(&mut self, key: &'static str, set: bool) {
        if set {
            self.push(key, "true");
        }
    }

    /// The comment block for the top of an output file.
    pub fn header(&self) -> CliResult<String> {
        let mut out = String::new();
        out.push_str(&format!("# {MAGIC}\n"));
        out.push_str(&format!("# tool-version={}\n", env!("CARGO_PKG_VERSION")));
        out.push_str(&format!("# subcommand={}\n", self.subcommand));
        for (key, value) in &self.entries {
            if value.contains('\n') || value.contains('\r') {
                return Err(CliError::usage(format!(
                    "value for `{key}` contains a line break and cannot be recorded in a run header"
                )));
            }
            out.push_str(&format!("# {key}={value}\n"));
        }
        Ok(out)
    }
}

/// Reads a `--config` file into a key map. Two layouts are accepted: a plain
/// `key=value` file (`#` lines are comments), or any tool output, where the
/// leading `#` comment block carries the keys and parsing stops at the first
/// data line.
pub fn load_config(path: &Path, subcommand: &str) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text, subcommand)
        .map_err(|e| CliError::usage(format!("{}: {}", path.display(), e.one_line())))
}

pub fn parse_config(text: &str, subcommand: &str) -> CliResult<BTreeMap<String, String>> {
    // Only the magic line announces an output-file header; any other leading
    // `#` line is just a comment in a plain key=value file.
    let header_mode = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .and_then(|l| l.trim_start().strip_prefix('#'))
        .is_some_and(|rest| rest.trim() == MAGIC);

    let mut map = BTreeMap::new();
    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let content = match trimmed.strip_prefix('#') {
            Some(rest) => {
                if !header_mode {
                    continue; // comment in a plain key=value file
                }
                rest.trim()
            }
            None => {
                if header_mode {
                    break; // end of the header block, data follows
                }
                trimmed
            }
        };
        if content.is_empty() || content == MAGIC || content.starts_with("tool-version=") {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("config line `{content}` is not key=value")))?;
        let (key, value) = (key.trim(), value.trim());
        if key == "subcommand" {
            if value != subcommand {
                return Err(CliError::usage(format!(
                    "config was written by subcommand `{value}`, not `{subcommand}`"
                )));
            }
            continue;
        }
        if map.insert(key.to_string(), value.to_string()).is_some() {
            return Err(CliError::usage(format!("duplicate config key `{key}`")));
        }
    }
    Ok(map)
}

/// Layers explicit command-line values over config-file values over
/// defaults, and tracks key usage so leftovers can be rejected.
#[derive(Debug)]
pub struct Merger {
    map: BTreeMap<String, String>,
    used: BTreeSet<String>,
}

impl Merger {
    pub fn new(map: BTreeMap<String, String>) -> Self {
        Self { map, used: BTreeSet::new() }
    }

    pub fn empty() -> Self {
        Self::new(BTreeMap::new())
    }

    /// Was this key present in the config file?
    pub fn in_config(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    fn take<T: FromStr>(&mut self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: Display,
    {
        self.used.insert(key.to_string());
        match self.map.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|e| {
                CliError::usage(format!("invalid value `{raw}` for `{key}`: {e}"))
            }),
        }
    }

    /// A value with a default: command line beats config beats default.
    pub fn value<T: FromStr>(&mut self, key: &str, cli: Option<T>, default: T) -> CliResult<T>
    where
        T::Err: Display,
    {
        let from_config = self.take(key)?;
        Ok(cli.or(from_config).unwrap_or(default))
    }

    /// A value that may stay unset.
    pub fn optional<T: FromStr>(&mut self, key: &str, cli: Option<T>) -> CliResult<Option<T>>
    where
        T::Err: Display,
    {
        let from_config = self.take(key)?;
        Ok(cli.or(from_config))
    }

    /// A value that must be set somewhere.
    pub fn required<T: FromStr>(&mut self, key: &str, cli: Option<T>) -> CliResult<T>
    where
        T::Err: Display,
    {
        self.optional(key, cli)?
            .ok_or_else(|| CliError::usage(format!("missing required option `--{key}`")))
    }

    /// A boolean switch; the config form is `key=true` or `key=false`.
    pub fn flag(&mut self, key: &str, cli: bool) -> CliResult<bool> {
        let from_config: Option<bool> = self.take(key)?;
        Ok(cli || from_config.unwrap_or(false))
    }

    /// Rejects any config key no field consumed.
    pub fn finish(self) -> CliResult<()> {
        for key in self.map.keys() {
            if !self.used.contains(key) {
                return Err(CliError::usage(format!("unknown config key `{key}`")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_round_trips_through_the_parser() {
        let mut config = RunConfig::new("resample");
        config.push("input", "data.csv");
        config.push("filter", 5);
        config.push("sample", 20);
        config.push("seed", 42u64);
        let header = config.header().unwrap();
        assert!(header.starts_with("# rebalance-config v1\n"));

        let file = format!("{header}label,occurrence\na,\"x y\"\n");
        let map = parse_config(&file, "resample").unwrap();
        assert_eq!(map.get("input").unwrap(), "data.csv");
        assert_eq!(map.get("filter").unwrap(), "5");
        assert_eq!(map.get("sample").unwrap(), "20");
        assert_eq!(map.get("seed").unwrap(), "42");
        assert_eq!(map.len(), 4, "data lines must not leak into the config");
    }

    #[test]
    fn plain_files_accept_comments_and_blanks() {
        let text = "\n# a comment\ninput = data.csv\nfilter=5\n\n";
        let map = parse_config(text, "resample").unwrap();
        assert_eq!(map.get("input").unwrap(), "data.csv");
        assert_eq!(map.get("filter").unwrap(), "5");
        assert_eq!(map.len(), 2);
    }

    #[test]
    fn wrong_subcommand_is_rejected() {
        let err = parse_config("# rebalance-config v1\n# subcommand=sweep\n", "resample");
        assert!(matches!(err, Err(CliError::Usage(_))));
    }

    #[test]
    fn malformed_lines_and_duplicates_are_rejected() {
        assert!(parse_config("not-an-assignment\n", "x").is_err());
        assert!(parse_config("a=1\na=2\n", "x").is_err());
    }

    #[test]
    fn merger_prefers_cli_then_config_then_default() {
        let map = parse_config("filter=7\n", "x").unwrap();
        let mut m = Merger::new(map);
        assert_eq!(m.value("filter", Some(3usize), 0).unwrap(), 3);
        let map = parse_config("filter=7\n", "x").unwrap();
        let mut m = Merger::new(map);
        assert_eq!(m.value("filter", None::<usize>, 0).unwrap(), 7);
        let mut m = Merger::empty();
        assert_eq!(m.value("filter", None::<usize>, 9).unwrap(), 9);
    }

    #[test]
    fn unknown_keys_fail_at_finish() {
        let mut m = Merger::new(parse_config("mystery=1\n", "x").unwrap());
        let _ = m.value("filter", None::<usize>, 0).unwrap();
        assert!(matches!(m.finish(), Err(CliError::Usage(_))));
    }

    #[test]
    fn bad_numbers_are_usage_errors() {
        let mut m = Merger::new(parse_config("filter=many\n", "x").unwrap());
        assert!(matches!(m.value("filter", None::<usize>, 0), Err(CliError::Usage(_))));
    }
}
