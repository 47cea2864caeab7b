//! Interaction aggregates, per-condition summaries and the Friedman test.

pub mod dist;
mod friedman;
mod interaction;
mod summary;

pub use friedman::{friedman, mid_ranks, FriedmanResult};
pub use interaction::{aggregate, AggregateInteraction, PoseSample, Quat, GAP_WARNING_SECONDS};
pub use summary::{
    summarize, summarize_with, CellSummary, Estimate, InteractionSummary, Metric, ResponseRecord, Summary,
    VisualisationTest,
};

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum AnalyticsError {
    #[error("log has no samples")]
    EmptyLog,
    #[error("sample {index} is earlier than its predecessor")]
    TimeReversed { index: usize },
    #[error("sample {index} has a non-unit quaternion")]
    NonUnitQuaternion { index: usize },
    #[error("non-finite value")]
    NonFinite,
    #[error("no records")]
    EmptySample,
    #[error("record {index} has a non-positive response time")]
    InvalidResponseTime { index: usize },
    #[error("need at least 2 subjects, got {0}")]
    TooFewSubjects(usize),
    #[error("need at least 2 conditions, got {0}")]
    TooFewConditions(usize),
    #[error("rows differ in length")]
    RaggedMatrix,
}
