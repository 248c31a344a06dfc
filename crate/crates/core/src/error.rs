use std::fmt;

use thiserror::Error;

use crate::pairing::GroupTag;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which check of a verification procedure refused the proof.
///
/// Only diagnostic: every rejection must be treated the same way by callers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RejectReason {
    /// Private or Fiat-Shamir projection `w^T x != u^T y`.
    Projection,
    /// Single pairing equation `e(zeta; g2) != eta` of the trustee-assisted flow.
    Pairing,
    /// Equation `i` (0-based) of the per-row pairing checks.
    Row(usize),
    /// Freivalds check on the first `s` vector.
    SCheck1,
    /// Freivalds check on the second `s` vector.
    SCheck2,
    /// Freivalds check on `z`.
    ZCheck,
    /// Pairing-product check on `C`.
    CCheck,
    /// Final masked equation.
    Final,
    /// A chunk of a chunked dot-product failed.
    Chunk(usize),
    /// The container integrity digest does not match its contents.
    Integrity,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::Projection => write!(f, "projection check"),
            RejectReason::Pairing => write!(f, "pairing check"),
            RejectReason::Row(i) => write!(f, "pairing equation for row {i}"),
            RejectReason::SCheck1 => write!(f, "s1 projection check"),
            RejectReason::SCheck2 => write!(f, "s2 projection check"),
            RejectReason::ZCheck => write!(f, "z projection check"),
            RejectReason::CCheck => write!(f, "C pairing-product check"),
            RejectReason::Final => write!(f, "final masked equation"),
            RejectReason::Chunk(i) => write!(f, "chunk {i}"),
            RejectReason::Integrity => write!(f, "integrity digest"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("group mismatch: expected {expected:?}, found {found:?}")]
    MixedGroups { expected: GroupTag, found: GroupTag },
    #[error("malformed encoding: {0}")]
    Decode(String),
    #[error("value out of range: {0}")]
    Range(String),
    #[error("pair was not bound into the Fiat-Shamir transcript")]
    UnboundPair,
    #[error("rejected: {0}")]
    Rejected(RejectReason),
}

impl Error {
    pub fn is_rejection(&self) -> bool {
        matches!(self, Error::Rejected(_))
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn decode(msg: impl Into<String>) -> Self {
        Error::Decode(msg.into())
    }
}

pub(crate) fn check_len(what: &str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::Dimension(format!(
            "{what}: expected length {expected}, got {got}"
        )));
    }
    Ok(())
}
