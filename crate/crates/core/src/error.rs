use thiserror::Error;

use crate::graph::VertexSet;
use crate::lp::Rational;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// A negative answer that carries a witness (hypothesis failed, matrix not TU, ...).
    Verdict,
    Input,
    Capacity,
    /// A result that contradicts a guaranteed invariant.
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("{what} exceeds the enumeration cap ({actual} > {limit})")]
    Capacity {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("isolated cut set {set} has min(f1, f2) > 0")]
    PreconditionViolated { set: VertexSet },

    #[error("hypothesis violated at {set} (slack {slack}): {reason}")]
    HypothesisViolated {
        set: VertexSet,
        slack: Rational,
        reason: String,
    },

    #[error("objective is not a potential difference: cycle through arc {arc} has non-zero sum")]
    ObjectiveNotRealizable { arc: usize },

    #[error("underlying edge connectivity {value} is below {required} (cut {witness})")]
    ConnectivityTooLow {
        value: usize,
        required: usize,
        witness: VertexSet,
    },

    #[error("matrix is not totally unimodular: submatrix rows {rows:?} cols {cols:?} has determinant {det}")]
    NotTu {
        rows: Vec<usize>,
        cols: Vec<usize>,
        det: i64,
    },

    #[error("matroid reduction inapplicable: {0}")]
    ReductionInapplicable(String),

    #[error("internal invariant failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Input(_) | Error::Domain(_) => ErrorClass::Input,
            Error::Capacity { .. } => ErrorClass::Capacity,
            Error::Internal(_) => ErrorClass::Internal,
            Error::PreconditionViolated { .. }
            | Error::HypothesisViolated { .. }
            | Error::ObjectiveNotRealizable { .. }
            | Error::ConnectivityTooLow { .. }
            | Error::NotTu { .. }
            | Error::ReductionInapplicable(_) => ErrorClass::Verdict,
        }
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_cap(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        Err(Error::Capacity {
            what,
            limit,
            actual,
        })
    } else {
        Ok(())
    }
}
