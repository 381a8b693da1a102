//! Crate-wide error type.

use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A party count or bit-string length outside the supported range.
    #[error("invalid arity: {0}")]
    InvalidArity(String),

    /// A proposed subgroup basis is linearly dependent over F2.
    #[error("dependent basis: {0}")]
    DependentBasis(String),

    /// A coset decomposition was requested for the full group.
    #[error("subgroup is not proper: {0}")]
    NotProperSubgroup(String),

    /// Subgroup order does not match the requested construction parameter.
    #[error("subgroup order mismatch: expected 2^{expected_log2}, got {got}")]
    SubgroupOrderMismatch { expected_log2: u32, got: usize },

    /// An operator failed a structural requirement (Hermiticity, squareness).
    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    /// Matrix or vector dimensions are inconsistent with the declared shape.
    #[error("shape error: {0}")]
    ShapeError(String),

    /// A state vector failed validation (zero norm, wrong term count, ...).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A basis or phase index is out of range.
    #[error("invalid index: {0}")]
    InvalidIndex(String),

    /// An enumeration or solver exceeded its configured size budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// Construction only defined for even local dimension.
    #[error("unsupported dimension parity: d = {d} is odd")]
    UnsupportedDimensionParity { d: usize },

    /// The stopper search ran out of budget or exhausted the space.
    #[error(
        "no arrangement found after exploring {explored} nodes{}",
        if *.exhausted { " (search space exhausted)" } else { " (budget reached)" }
    )]
    NoArrangementFound { explored: u64, exhausted: bool },

    /// A state handed to the group-witness detector is not in canonical form.
    #[error("not a canonical-form state: {0}")]
    NotCanonicalForm(String),

    /// A selected vector family is not a maximally-entangled-subset witness.
    #[error("not an MES witness: {0}")]
    NotMesWitness(String),

    /// Fourier frame recovery failed (degenerate eigenphases or no valid pair).
    #[error("frame recovery ambiguous: {0}")]
    FrameAmbiguous(String),

    /// A stopper-witness structural condition failed.
    #[error("stopper witness condition ({condition}) violated: {detail}")]
    StopperCondition { condition: String, detail: String },

    /// A document failed to parse.
    #[error("parse error at line {line}, column {column}: {message}")]
    ParseError {
        line: usize,
        column: usize,
        message: String,
    },

    /// I/O failure surfaced by the CLI layer.
    #[error("io error: {0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::ParseError {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
