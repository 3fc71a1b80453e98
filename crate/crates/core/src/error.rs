use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    /// A required column is missing from a release file.
    #[error("schema error: missing column `{column}`")]
    Schema { column: String },

    /// A cell could not be parsed. `row` is the 1-based data row index.
    #[error("parse error at data row {row}, column `{column}`: {value:?}")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },

    #[error("manifest error at line {line}: {message}")]
    Manifest { line: usize, message: String },

    #[error("file `{0}` is not a matched file of this triple")]
    UnmatchedFile(String),

    #[error("invalid release triple: {0}")]
    Triple(String),

    #[error("preprocessing error: {0}")]
    Preprocess(String),

    #[error("statistics error: {0}")]
    Statistics(String),

    #[error("weighting error: {0}")]
    Weighting(String),

    /// A caller broke an API precondition (wrong dimensionality, bad range, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
