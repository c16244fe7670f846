//! Crate-wide error type.

use std::fmt;
use std::path::PathBuf;

use crate::attack_graph::ValidationReport;

/// Everything that can go wrong across the toolkit.
///
/// Graph validation *violations* are data, not failures; they only become an
/// [`Error::InvalidGraph`] when an operation requires a valid graph.
#[derive(Debug)]
pub enum Error {
    /// File could not be read or written.
    Io { path: PathBuf, source: std::io::Error },
    /// File contents did not match the expected schema.
    Parse { path: Option<PathBuf>, message: String },
    /// A graph failed validation where a valid graph is required.
    InvalidGraph(ValidationReport),
    /// Structural problem that only surfaces when compiling or generating a
    /// game (e.g. an exploit with no post-condition privilege).
    Graph(String),
    /// Bad configuration value (discount out of range, epsilon <= 0, ...).
    Config(String),
    /// A vulnerability key did not resolve.
    UnknownKey(String),
    /// A node id query did not resolve (or named a node of the wrong kind).
    Query(String),
    /// Numerical failure inside the matrix-game solver.
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Io { path, source } => write!(f, "{}: {}", path.display(), source),
            Error::Parse { path: Some(p), message } => {
                write!(f, "{}: parse error: {}", p.display(), message)
            }
            Error::Parse { path: None, message } => write!(f, "parse error: {}", message),
            Error::InvalidGraph(report) => write!(f, "invalid attack graph:\n{}", report),
            Error::Graph(msg) => write!(f, "graph structure error: {}", msg),
            Error::Config(msg) => write!(f, "configuration error: {}", msg),
            Error::UnknownKey(key) => write!(f, "unknown vulnerability key `{}`", key),
            Error::Query(msg) => write!(f, "query error: {}", msg),
            Error::Solver(msg) => write!(f, "solver error: {}", msg),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn parse(path: Option<PathBuf>, message: impl Into<String>) -> Self {
        Error::Parse { path, message: message.into() }
    }
}
