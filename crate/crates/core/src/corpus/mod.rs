//! Corpus ingestion, batch evaluation, reports and the ability map.

pub mod ability;
pub mod eval;
pub mod load;
pub mod report;
pub mod stats;

use thiserror::Error;

pub use ability::{emit_ability_map, AbilityAnnotation, AbilityError, AXES};
pub use eval::{evaluate, EvalOptions, Evaluation, GptOutcome, GptStatus, ItemResult};
pub use load::{
    load_annotations, load_corpus, load_predictions, parse_annotations, parse_corpus, parse_predictions, CorpusItem,
    LineError, Loaded, PredictionRecord,
};
pub use report::{emit_report, parse_csv_report, AggregateReport, ErrorProportions, MetricValue, ReportFormat};
pub use stats::{corpus_stats, FormatStats};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CorpusError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{file}: no line could be parsed{}", first_error(.errors))]
    MalformedFile { file: String, errors: Vec<LineError> },
    #[error("duplicate id {id:?} on lines {first_line} and {second_line}")]
    DuplicateId { id: String, first_line: usize, second_line: usize },
    #[error("prediction id {id:?} is not in the corpus")]
    UnknownPrediction { id: String },
    #[error("worker pool: {0}")]
    Pool(String),
}

fn first_error(errors: &[LineError]) -> String {
    errors.first().map(|e| format!(" ({e})")).unwrap_or_default()
}
