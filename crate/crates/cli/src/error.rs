//! The two failure classes of the binary: bad invocations and bad runs.

use std::fmt;

/// `Usage` exits with status 2 (the invocation was wrong), `Runtime` with
/// status 1 (the invocation was fine but the run failed). Both print a
/// single `error:` line on stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self::Usage(message.into())
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        Self::Runtime(message.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Runtime(_) => 1,
        }
    }

    /// The message with any embedded line breaks flattened, so stderr
    /// carries exactly one machine-parsable line.
    pub fn one_line(&self) -> String {
        let raw = match self {
            Self::Usage(m) | Self::Runtime(m) => m,
        };
        raw.split(['\n', '\r']).filter(|p| !p.is_empty()).collect::<Vec<_>>().join("; ")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.one_line())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Runtime(e.to_string())
    }
}

impl From<rebalance_core::experiment::ExperimentError> for CliError {
    fn from(e: rebalance_core::experiment::ExperimentError) -> Self {
        Self::Runtime(e.to_string())
    }
}

impl From<rebalance_core::dataset::DatasetError> for CliError {
    fn from(e: rebalance_core::dataset::DatasetError) -> Self {
        Self::Runtime(e.to_string())
    }
}

impl From<rebalance_core::resample::ResampleError> for CliError {
    fn from(e: rebalance_core::resample::ResampleError) -> Self {
        Self::Runtime(e.to_string())
    }
}

impl From<rebalance_core::metrics::MetricsError> for CliError {
    fn from(e: rebalance_core::metrics::MetricsError) -> Self {
        Self::Runtime(e.to_string())
    }
}

impl From<rebalance_core::nbayes::NbError> for CliError {
    fn from(e: rebalance_core::nbayes::NbError) -> Self {
        Self::Runtime(e.to_string())
    }
}

impl From<rebalance_core::costsensitive::CostError> for CliError {
    fn from(e: rebalance_core::costsensitive::CostError) -> Self {
        Self::Runtime(e.to_string())
    }
}
