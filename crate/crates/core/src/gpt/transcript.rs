//! Record and replay of prompt/response pairs as JSON lines.

use std::collections::{HashMap, VecDeque};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::client::{ChatTransport, TransportError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub prompt: String,
    pub response: String,
}

/// Forwards to `inner` and appends every successful exchange to a file.
pub struct RecordingTransport<T> {
    inner: T,
    out: Mutex<File>,
}

impl<T: ChatTransport> RecordingTransport<T> {
    pub fn new(inner: T, path: &Path) -> std::io::Result<Self> {
        let out = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(RecordingTransport { inner, out: Mutex::new(out) })
    }
}

impl<T: ChatTransport> ChatTransport for RecordingTransport<T> {
    fn complete(&self, prompt: &str) -> Result<String, TransportError> {
        let response = self.inner.complete(prompt)?;
        let entry = TranscriptEntry { prompt: prompt.to_string(), response: response.clone() };
        let line = serde_json::to_string(&entry).map_err(|e| TransportError(e.to_string()))?;
        let mut out = self.out.lock().unwrap_or_else(|e| e.into_inner());
        writeln!(out, "{line}").map_err(|e| TransportError(format!("transcript write failed: {e}")))?;
        Ok(response)
    }
}

/// Answers from a transcript. Repeated prompts consume their recorded
/// responses in order; the last one is reused once the queue runs dry.
pub struct ReplayTransport {
    entries: Mutex<HashMap<String, VecDeque<String>>>,
}

impl ReplayTransport {
    pub fn from_entries(entries: impl IntoIterator<Item = TranscriptEntry>) -> Self {
        let mut map: HashMap<String, VecDeque<String>> = HashMap::new();
        for e in entries {
            map.entry(e.prompt).or_default().push_back(e.response);
        }
        ReplayTransport { entries: Mutex::new(map) }
    }

    pub fn load(path: &Path) -> std::io::Result<Self> {
        let mut entries = Vec::new();
        for (n, line) in BufReader::new(File::open(path)?).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: TranscriptEntry = serde_json::from_str(&line)
                .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, format!("line {}: {e}", n + 1)))?;
            entries.push(entry);
        }
        Ok(ReplayTransport::from_entries(entries))
    }
}

impl ChatTransport for ReplayTransport {
    fn complete(&self, prompt: &str) -> Result<String, TransportError> {
        let mut map = self.entries.lock().unwrap_or_else(|e| e.into_inner());
        let queue = map.get_mut(prompt).ok_or_else(|| TransportError("prompt not found in transcript".into()))?;
        if queue.len() > 1 {
            Ok(queue.pop_front().expect("non-empty"))
        } else {
            queue.front().cloned().ok_or_else(|| TransportError("empty transcript entry".into()))
        }
    }
}
