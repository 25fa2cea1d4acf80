use thiserror::Error;

/// Errors raised anywhere in the toolkit.
///
/// The variants are grouped by how a caller is expected to react: bad input
/// (`Argument`, `DimensionMismatch`, `Representation`, ...), a theorem whose
/// hypotheses do not hold (`Precondition`, `Refused`), and a broken
/// certificate inside the implementation (`AuditFailed`).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument error: {0}")]
    Argument(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("representation error: {0}")]
    Representation(String),

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("degenerate basis: {0}")]
    Degeneracy(String),

    #[error("unbounded: {0}")]
    Unbounded(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("certificate error: {0}")]
    Certificate(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The theorem does not apply to this input; not a bug.
    #[error("refused: {0}")]
    Refused(String),

    /// A guarantee that must hold by construction was violated.
    #[error("audit failed: {0}")]
    AuditFailed(String),
}

impl Error {
    /// Whether the error means "hypotheses not met" rather than bad input or a bug.
    pub fn is_refusal(&self) -> bool {
        matches!(self, Error::Refused(_) | Error::Precondition(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
