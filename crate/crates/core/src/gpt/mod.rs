//! Model-based similarity: prompts, response parsing and the endpoint client.

pub mod client;
pub mod prompt;
pub mod response;
pub mod transcript;

use thiserror::Error;

pub use client::{
    gptscore, ChatEndpointConfig, ChatTransport, GptScore, GptScorer, HttpTransport, QueryOrder, TransportError,
};
pub use prompt::{build_description_prompt, build_gptscore_prompt, GPTSCORE_TEMPLATE};
pub use response::{parse_gptscore_response, GptScorePair, ParsedScores};
pub use transcript::{RecordingTransport, ReplayTransport, TranscriptEntry};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GptError {
    #[error("malformed response: {0}")]
    MalformedResponse(String),
    #[error("endpoint unavailable after {attempts} attempt(s): {last_error}")]
    EndpointUnavailable { attempts: u32, last_error: String },
    #[error("only one query order succeeded ({succeeded:?}): {cause}")]
    PartialResult { pair: GptScorePair, succeeded: QueryOrder, cause: Box<GptError> },
    #[error("invalid endpoint configuration: {0}")]
    InvalidConfig(String),
}
