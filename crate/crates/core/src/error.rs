use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed element: {0}")]
    MalformedElement(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("overflow: evaluation at input magnitude {magnitude:e} produced non-finite values")]
    Overflow { magnitude: f64 },

    #[error("overflow at iterate m={m}: scaled input magnitude {magnitude:e} produced non-finite values")]
    IterateOverflow { m: u32, magnitude: f64 },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("degenerate cloud: {0}")]
    DegenerateCloud(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
