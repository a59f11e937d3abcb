use thiserror::Error;

use crate::base::Implication;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: implication with empty premise")]
    EmptyPremise { line: usize },

    #[error("element `{0}` is not in the ground set")]
    ElementOutOfGround(String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("not a split: premise of `{text}` meets both sides")]
    NotASplit { implication: Implication, text: String },

    #[error("not an acyclic split: {0}")]
    NotAcyclic(String),

    #[error("bad bipartition: {0}")]
    BadBipartition(String),

    #[error("bases are over different ground sets")]
    GroundMismatch,

    #[error("closure systems have overlapping ground sets")]
    GroundOverlap,

    #[error("set `{0}` is not closed")]
    NotClosed(String),

    #[error("enumeration budget of {budget} closure evaluations exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("base admits no layered partition")]
    NotLayered,

    #[error("infeasible generator spec: {0}")]
    Infeasible(String),

    #[error("invalid tree: {0}")]
    Tree(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
