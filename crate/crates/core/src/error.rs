use crate::model::{ActorId, ModeId};
use crate::validate::ValidationResult;

/// Faults raised by the computation stages.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("{what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: String,
        found: String,
    },
    #[error("{what} entry ({row}, {col}) = {value} is outside the scale")]
    OutOfScale {
        what: &'static str,
        row: usize,
        col: usize,
        value: i32,
    },
    #[error("degenerate influence network: {0}")]
    DegenerateNetwork(&'static str),
    #[error("unknown actor {0}")]
    UnknownActor(ActorId),
    #[error("unknown failure mode {0}")]
    UnknownMode(ModeId),
}

/// Failure of a full analysis run.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("project is invalid:\n{0}")]
    Invalid(ValidationResult),
    #[error(transparent)]
    Engine(#[from] EngineError),
}
