//! Input schema, analysis pipeline, report serialization, and the command
//! drivers behind the `circulant` binary.

mod commands;
mod report;
mod schema;

pub use commands::{
    cmd_analyze, cmd_oracle, cmd_sweep, oracle_equivalence, Analysis, AnalyzeOptions,
    ConstraintSetName, OracleCounterexample, OracleOutput, Source, SweepOutput,
};
pub use report::{
    AnalysisReport, ConstraintSetDoc, InputEcho, PlaneCurvature, TensorEntry, ValidationBlock,
    VerdictDoc,
};
pub use schema::{BracketDoc, InputDoc, MetricDoc, Model, QDoc};

use thiserror::Error;

/// Top-level command error. Every variant carries the process exit status
/// mandated for it, so scripted callers can dispatch on `$?` alone.
#[derive(Debug, Error)]
pub enum AppError {
    #[error("input error: {0}")]
    Schema(String),
    #[error("Jacobi validation failed: {0}")]
    Jacobi(String),
    #[error("singular metric: {0}")]
    SingularMetric(String),
    #[error("structure check failed under --strict: {0}")]
    StructureCheck(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Schema(_) => 2,
            AppError::Jacobi(_) => 3,
            AppError::SingularMetric(_) => 4,
            AppError::StructureCheck(_) => 5,
            AppError::Io(_) => 1,
        }
    }
}
