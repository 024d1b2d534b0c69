//! Extraction of the two scores from a free-form model response.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::GptError;

pub const CONTENT_KEY: &str = "content_similarity";
pub const STRUCTURE_KEY: &str = "structural_similarity";
pub const MAX_SCORE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GptScorePair {
    pub content_similarity: f64,
    pub structural_similarity: f64,
}

impl GptScorePair {
    /// Fails unless both values are finite and within `[0, 10]`.
    pub fn new(content_similarity: f64, structural_similarity: f64) -> Result<Self, GptError> {
        for v in [content_similarity, structural_similarity] {
            if !(0.0..=MAX_SCORE).contains(&v) {
                return Err(GptError::MalformedResponse(format!("score {v} outside [0, 10]")));
            }
        }
        Ok(GptScorePair { content_similarity, structural_similarity })
    }

    pub fn mean(a: &GptScorePair, b: &GptScorePair) -> GptScorePair {
        GptScorePair {
            content_similarity: (a.content_similarity + b.content_similarity) / 2.0,
            structural_similarity: (a.structural_similarity + b.structural_similarity) / 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedScores {
    pub pair: GptScorePair,
    pub diagnostics: Vec<String>,
}

fn numeric(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => s.trim().parse::<f64>().ok(),
        _ => None,
    }
    .filter(|x| x.is_finite())
}

fn pair_from_object(v: &Value) -> Option<(f64, f64)> {
    let obj = v.as_object()?;
    Some((numeric(obj.get(CONTENT_KEY)?)?, numeric(obj.get(STRUCTURE_KEY)?)?))
}

/// Every well-formed JSON object in `text` (including nested ones) that
/// carries both keys with numeric values, in order of their opening brace.
fn json_candidates(text: &str) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for (start, _) in text.match_indices('{') {
        let mut stream = serde_json::Deserializer::from_str(&text[start..]).into_iter::<Value>();
        if let Some(Ok(value)) = stream.next() {
            if let Some(pair) = pair_from_object(&value) {
                out.push(pair);
            }
        }
    }
    out
}

/// Reads `"key" : number` inside `block`; used when a model copies the comma-less
/// example layout.
fn loose_value(block: &str, key: &str) -> Option<f64> {
    let quoted = format!("\"{key}\"");
    let at = block.rfind(&quoted)? + quoted.len();
    let rest = block[at..].trim_start().strip_prefix(':')?.trim_start();
    let rest = rest.strip_prefix('"').unwrap_or(rest);
    let end =
        rest.find(|c: char| !(c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'))).unwrap_or(rest.len());
    rest[..end].parse::<f64>().ok().filter(|x| x.is_finite())
}

fn loose_candidate(text: &str) -> Option<(f64, f64)> {
    let mut end = text.len();
    while let Some(close) = text[..end].rfind('}') {
        if let Some(open) = text[..close].rfind('{') {
            let block = &text[open..close];
            if let (Some(c), Some(s)) = (loose_value(block, CONTENT_KEY), loose_value(block, STRUCTURE_KEY)) {
                return Some((c, s));
            }
        }
        end = close;
    }
    None
}

fn clamp(name: &str, v: f64, diagnostics: &mut Vec<String>) -> f64 {
    let c = v.clamp(0.0, MAX_SCORE);
    if c != v {
        diagnostics.push(format!("{name} {v} clamped to {c}"));
    }
    c
}

/// Scores from the last JSON object holding both keys. Values may be numbers
/// or numeric strings and are clamped into `[0, 10]`.
pub fn parse_gptscore_response(response: &str) -> Result<ParsedScores, GptError> {
    let mut diagnostics = Vec::new();
    let found = match json_candidates(response).pop() {
        Some(p) => Some(p),
        None => {
            let loose = loose_candidate(response);
            if loose.is_some() {
                diagnostics.push("scores read from a non-JSON object".to_string());
            }
            loose
        }
    };
    let (c, s) = found.ok_or_else(|| {
        GptError::MalformedResponse(format!("no object with \"{CONTENT_KEY}\" and \"{STRUCTURE_KEY}\""))
    })?;
    let pair = GptScorePair {
        content_similarity: clamp(CONTENT_KEY, c, &mut diagnostics),
        structural_similarity: clamp(STRUCTURE_KEY, s, &mut diagnostics),
    };
    Ok(ParsedScores { pair, diagnostics })
}
