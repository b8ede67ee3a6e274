use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("argument {arg} outside the supported domain {domain}")]
    Domain { arg: f64, domain: &'static str },

    #[error("no convergence after {iterations} iterations: {what}")]
    Convergence { what: String, iterations: usize },

    #[error("expansion truncated: sum |a_n|^2 = {achieved:.9}; {advice}")]
    Truncation { achieved: f64, advice: String },

    #[error("grid configuration: {0}")]
    GridConfig(String),

    #[error("grid does not cover the state: {0}")]
    DomainCoverage(String),

    #[error("detection failed: {0}")]
    Detection(String),

    #[error("at t = {time}: {source}")]
    Sample {
        time: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("schema mismatch in {path}: {message}")]
    Schema { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn at_time(self, time: f64) -> Self {
        Error::Sample {
            time,
            source: Box::new(self),
        }
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Contract(_) | Error::GridConfig(_) => 2,
            Error::Schema { .. } => 4,
            Error::Io { .. } => 1,
            Error::Sample { source, .. } => source.exit_code().max(3),
            _ => 3,
        }
    }
}
