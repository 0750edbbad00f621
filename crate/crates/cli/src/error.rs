use std::io;

use thiserror::Error;
use wmetrics::experiments::SweepError;
use wmetrics::MetricError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },

    #[error("could not satisfy preconditions after {0} generated instances")]
    Preconditions(usize),

    #[error("{0} bound violations")]
    Violations(usize),

    #[error(transparent)]
    Metric(#[from] MetricError),

    #[error(transparent)]
    Sweep(SweepError),
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::InvalidConfig { field, message } => {
                CliError::Usage(format!("invalid value for --{field}: {message}"))
            }
            SweepError::Metric(m) => CliError::Metric(m),
            other => CliError::Sweep(other),
        }
    }
}

impl CliError {
    pub fn io(path: impl Into<String>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Metric(MetricError::DegenerateLabels(_)) => 2,
            CliError::Sweep(SweepError::RedrawCapExceeded(_)) => 2,
            CliError::Violations(_) => 3,
            _ => 1,
        }
    }
}
