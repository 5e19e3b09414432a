use thiserror::Error;

use crate::classifier::Lemma;

pub type Result<T> = std::result::Result<T, GkmError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GkmError {
    #[error("zero weight")]
    ZeroWeight,

    #[error("weight {weight} has {found} coordinates, expected {expected}")]
    RankMismatch { weight: String, expected: usize, found: usize },

    #[error("k must be at least 2, got {0}")]
    InvalidK(usize),

    #[error("weights {0} and {1} do not span a plane")]
    DependentPlane(String, String),

    #[error("malformed graph: {}", .0.join("; "))]
    Structure(Vec<String>),

    #[error("faces require 3-independence: {0}")]
    FacesRequireGkm3(String),

    #[error("edge {0} carries no weight label")]
    Unlabeled(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not CP-normalizable: {0}")]
    NotCpNormalizable(String),

    #[error("not HP-normalizable: {0}")]
    NotHpNormalizable(String),

    #[error("not OP2-normalizable: {0}")]
    NotOp2Normalizable(String),

    #[error("sign system infeasible: {0}")]
    SignSystemInfeasible(String),

    #[error("{lemma} violated: {detail}")]
    Lemma { lemma: Lemma, detail: String },

    #[error("root system: {0}")]
    RootSystem(String),

    #[error("Weyl group closure exceeds the bound of {0} elements")]
    WeylBoundExceeded(usize),

    #[error("graph is not the GKM graph of an equivariantly formal action at this cutoff: {0}")]
    NotFormal(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("the integer-coefficient checks require an orientable graph")]
    NonOrientable,

    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error("I/O error: {0}")]
    Io(String),
}

impl GkmError {
    pub fn structure(msg: impl Into<String>) -> Self {
        GkmError::Structure(vec![msg.into()])
    }

    pub fn lemma(lemma: Lemma, detail: impl Into<String>) -> Self {
        GkmError::Lemma { lemma, detail: detail.into() }
    }
}

impl From<std::io::Error> for GkmError {
    fn from(e: std::io::Error) -> Self {
        GkmError::Io(e.to_string())
    }
}
