use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal error: {0}")]
    Internal(String),

    /// A singular-value spectrum without a clean gap at the rank cutoff.
    #[error("ambiguous numerical rank near {cutoff:e}: singular values {above:e} / {below:e} (ratio {ratio:.3e})")]
    AmbiguousRank {
        cutoff: f64,
        above: f64,
        below: f64,
        ratio: f64,
    },

    #[error("unknown case `{0}`")]
    UnknownCase(String),

    #[error("unknown space atom `{0}`")]
    UnknownAtom(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
