use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    /// A column named on the command line or in a manifest is not in the header.
    #[error("schema error: column '{column}' not found in header")]
    MissingColumn { column: String },

    /// `line` is the 1-based line in the file, header included.
    #[error("parse error at line {line}, column '{column}': cannot read {value:?} as a number")]
    Parse {
        line: u64,
        column: String,
        value: String,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("degenerate data: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
