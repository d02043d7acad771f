use std::fmt;

use thiserror::Error;

use crate::model::Side;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed expression text. `position` is a byte offset into the input.
    #[error("parse error at offset {position}: {message}")]
    Parse { position: usize, message: String },

    /// Structurally invalid expression, e.g. `choose(0, [a, b])`.
    #[error("invalid expression: {0}")]
    Domain(String),

    #[error("{size} nodes exceed the limit of {limit} for this operation")]
    UniverseTooLarge { size: usize, limit: usize },

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("invalid node: {0}")]
    InvalidNode(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid workload: {0}")]
    InvalidWorkload(String),

    #[error("read quorum {} and write quorum {} do not intersect", Names(.read), Names(.write))]
    IntersectionViolation { read: Vec<String>, write: Vec<String> },

    #[error("no {side} quorum is {f}-resilient")]
    NoResilientQuorum { side: Side, f: usize },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("solver failure: {0}")]
    SolverFailure(String),

    #[error("no feasible quorum system among {examined} examined candidates")]
    NoFeasibleCandidate { examined: usize },

    #[error("config error: {0}")]
    Config(String),
}

struct Names<'a>(&'a [String]);

impl fmt::Display for Names<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.join(", "))
    }
}
