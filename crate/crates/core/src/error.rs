//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by field construction, metric queries and experiments.
///
/// The variants deliberately mirror the process exit codes of the CLI:
/// configuration problems, geometry problems and numeric overflow are
/// distinct failure classes.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration (sizes, modes, parameter ranges).
    #[error("config: {0}")]
    Config(String),

    /// Geometry that the lattice cannot honor (off-grid circles, balls
    /// touching the boundary, unresolvable annuli, infeasible packings).
    #[error("geometry: {0}")]
    Geometry(String),

    /// An exponentiated weight left the finite f64 range.
    #[error("numeric overflow: {0}")]
    Overflow(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("format: {0}")]
    Format(String),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn geometry(msg: impl Into<String>) -> Self {
        Error::Geometry(msg.into())
    }

    pub fn overflow(msg: impl Into<String>) -> Self {
        Error::Overflow(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
