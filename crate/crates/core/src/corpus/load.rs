//! JSON-lines readers for corpora, predictions and ability annotations.

use std::collections::HashMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::ability::AbilityAnnotation;
use super::CorpusError;
use crate::model::TableFormat;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusItem {
    pub id: String,
    pub instruction: String,
    pub input: String,
    /// Gold table text.
    pub output: String,
    pub format: TableFormat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: String,
    pub prediction: String,
}

/// A rejected line, numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for LineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// Records that parsed, with the line each came from, plus rejected lines.
#[derive(Debug, Clone, PartialEq)]
pub struct Loaded<T> {
    pub records: Vec<T>,
    pub lines: Vec<usize>,
    pub errors: Vec<LineError>,
}

trait Record: DeserializeOwned {
    fn key(&self) -> Option<&str>;
    fn validate(&self) -> Result<(), String>;
}

impl Record for CorpusItem {
    fn key(&self) -> Option<&str> {
        Some(&self.id)
    }

    fn validate(&self) -> Result<(), String> {
        if self.id.is_empty() {
            return Err("empty id".into());
        }
        if self.output.trim().is_empty() {
            return Err("empty output".into());
        }
        Ok(())
    }
}

impl Record for PredictionRecord {
    fn key(&self) -> Option<&str> {
        Some(&self.id)
    }

    fn validate(&self) -> Result<(), String> {
        if self.id.is_empty() {
            return Err("empty id".into());
        }
        Ok(())
    }
}

impl Record for AbilityAnnotation {
    fn key(&self) -> Option<&str> {
        Some(&self.model)
    }

    fn validate(&self) -> Result<(), String> {
        self.check().map_err(|e| e.to_string())
    }
}

fn parse_lines<T: Record>(source: &str, text: &str) -> Result<Loaded<T>, CorpusError> {
    let mut loaded = Loaded { records: Vec::new(), lines: Vec::new(), errors: Vec::new() };
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut non_blank = 0;
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        if line.trim().is_empty() {
            continue;
        }
        non_blank += 1;
        let record: T = match serde_json::from_str(line) {
            Ok(r) => r,
            Err(e) => {
                loaded.errors.push(LineError { line: line_no, message: e.to_string() });
                continue;
            }
        };
        if let Err(message) = record.validate() {
            loaded.errors.push(LineError { line: line_no, message });
            continue;
        }
        if let Some(key) = record.key() {
            if let Some(&first_line) = seen.get(key) {
                return Err(CorpusError::DuplicateId { id: key.to_string(), first_line, second_line: line_no });
            }
            seen.insert(key.to_string(), line_no);
        }
        loaded.records.push(record);
        loaded.lines.push(line_no);
    }
    if non_blank > 0 && loaded.records.is_empty() {
        return Err(CorpusError::MalformedFile { file: source.to_string(), errors: loaded.errors });
    }
    Ok(loaded)
}

fn read(path: &Path) -> Result<String, CorpusError> {
    std::fs::read_to_string(path)
        .map_err(|e| CorpusError::Io { path: path.display().to_string(), message: e.to_string() })
}

pub fn parse_corpus(text: &str) -> Result<Loaded<CorpusItem>, CorpusError> {
    parse_lines("<corpus>", text)
}

pub fn parse_predictions(text: &str) -> Result<Loaded<PredictionRecord>, CorpusError> {
    parse_lines("<predictions>", text)
}

pub fn parse_annotations(text: &str) -> Result<Loaded<AbilityAnnotation>, CorpusError> {
    parse_lines("<annotations>", text)
}

pub fn load_corpus(path: &Path) -> Result<Loaded<CorpusItem>, CorpusError> {
    parse_lines(&path.display().to_string(), &read(path)?)
}

pub fn load_predictions(path: &Path) -> Result<Loaded<PredictionRecord>, CorpusError> {
    parse_lines(&path.display().to_string(), &read(path)?)
}

pub fn load_annotations(path: &Path) -> Result<Loaded<AbilityAnnotation>, CorpusError> {
    parse_lines(&path.display().to_string(), &read(path)?)
}
