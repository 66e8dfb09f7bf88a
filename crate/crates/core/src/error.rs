use thiserror::Error;

use crate::search::{AnnealerState, RvsTrace};

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected order {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("order {0} is not a positive multiple of 4")]
    BadOrder(usize),

    #[error("capacity exceeded: {what} requires {required}, limit is {limit}")]
    Capacity {
        what: &'static str,
        required: String,
        limit: String,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid vector: {0}")]
    InvalidVector(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown format `{0}`")]
    UnknownFormat(String),

    #[error("random vector selection exhausted its budget after {restarts} restart(s)")]
    RvsExhausted {
        restarts: usize,
        partial: Box<RvsTrace>,
    },

    #[error("annealing exhausted its budget after {restarts} restart(s); best energy {}", best.energy)]
    AnnealExhausted {
        restarts: usize,
        best: Box<AnnealerState>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn capacity(
        what: &'static str,
        required: impl ToString,
        limit: impl ToString,
    ) -> Self {
        Error::Capacity {
            what,
            required: required.to_string(),
            limit: limit.to_string(),
        }
    }
}
