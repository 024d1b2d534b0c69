//! Scoring of generated tables against references in raw text, LaTeX and HTML.

pub mod corpus;
pub mod gpt;
pub mod hscore;
pub mod model;
pub mod parse;
pub mod render;
pub mod similarity;
pub mod text_metrics;
