//! Crate-wide error type.

/// Errors reported by library operations.
///
/// Structural problems (mismatched dimensions), capacity limits (an
/// enumeration would not fit), domain errors (arguments outside an
/// operation's mathematical domain), validation failures (data that does not
/// satisfy a required identity), unsupported inputs (well-formed but outside
/// the classified family), and parse errors are kept apart so callers can
/// react to each.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
