use thiserror::Error;

use crate::model::SpecViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {0}: a qudit needs d >= 2")]
    InvalidDimension(usize),

    #[error("invalid generator combo: {0}")]
    InvalidCombo(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid model spec:\n{}", format_violations(.0))]
    InvalidSpec(Vec<SpecViolation>),

    #[error("unknown model '{name}'; valid names: {}", .valid.join(", "))]
    UnknownModel { name: String, valid: Vec<String> },

    #[error("readout mismatch: {0}")]
    ReadoutMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parameter-shift rule not applicable to {parameter}: {reason}")]
    NotApplicable { parameter: String, reason: String },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("empty dataset")]
    EmptyDataset,

    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn format_violations(v: &[SpecViolation]) -> String {
    v.iter()
        .map(|e| format!("  {}: {}", e.path, e.message))
        .collect::<Vec<_>>()
        .join("\n")
}
