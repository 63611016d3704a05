//! Experiment driver: target sampling, trial execution, CSV, summaries.

mod experiment;
mod hard_family;
mod summary;
mod targets;

use thiserror::Error;

pub use experiment::{
    fmt_f64, read_records, records_to_csv, run_estimator, run_experiment, write_records,
    Algorithm, ExperimentSpec, TrialRecord, CSV_HEADER,
};
pub use hard_family::{validate_hard_family, HardFamilyReport, LevelScore};
pub use summary::{render_summary, summarize, SummaryRow};
pub use targets::{sample_targets, TargetMode};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("i/o error: {0}")]
    Io(String),
}
