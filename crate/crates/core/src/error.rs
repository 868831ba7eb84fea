use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by sampling, evaluation, and I/O across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation was called with an out-of-domain argument.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A scenario constraint does not hold. The message names the invariant.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// Quadrature or series evaluation failed to converge.
    #[error("numeric evaluation failed: {0}")]
    Numeric(String),

    /// Configuration text could not be parsed or resolved.
    #[error("config error: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
