use thiserror::Error;

use crate::group::GroupAxiomWitness;
use crate::ring::ValidationReport;

pub type Result<T, E = FusionError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum FusionError {
    #[error("malformed ring: {0}")]
    MalformedRing(String),

    #[error("malformed file: {0}")]
    MalformedFile(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("closure of `{label}` escapes the exploration depth {depth}")]
    DepthExceeded { label: String, depth: usize },

    #[error("not a subobject: {0}")]
    NotASubobject(String),

    #[error("not a group: {0}")]
    NotAGroup(GroupAxiomWitness),

    #[error("fusion axioms violated:\n{0}")]
    AxiomViolation(ValidationReport),

    #[error("invalid restriction:\n{0}")]
    InvalidRestriction(ValidationReport),

    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("search budget of {0} nodes exceeded")]
    SearchBudgetExceeded(u64),

    #[error("dimension overflow while computing `{0}`")]
    DimensionOverflow(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
