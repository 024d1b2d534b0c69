//! Chat-completion transport and the both-orders scorer.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Condvar, Mutex};
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use super::prompt::build_gptscore_prompt;
use super::response::{parse_gptscore_response, GptScorePair};
use super::GptError;

pub const DEFAULT_AUTH_ENV: &str = "TABLESCORE_API_KEY";

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{0}")]
pub struct TransportError(pub String);

/// Sends one user message and returns the assistant text.
pub trait ChatTransport: Send + Sync {
    fn complete(&self, prompt: &str) -> Result<String, TransportError>;
}

impl<T: ChatTransport + ?Sized> ChatTransport for &T {
    fn complete(&self, prompt: &str) -> Result<String, TransportError> {
        (**self).complete(prompt)
    }
}

impl<T: ChatTransport + ?Sized> ChatTransport for Box<T> {
    fn complete(&self, prompt: &str) -> Result<String, TransportError> {
        (**self).complete(prompt)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatEndpointConfig {
    /// Either a server root or the full `/chat/completions` URL.
    pub base_url: String,
    pub model_name: String,
    /// Environment variable holding the bearer token.
    pub auth_env: String,
    pub timeout: Duration,
    pub max_retries: u32,
    pub max_in_flight: usize,
    /// First backoff delay; doubles on each retry.
    pub retry_base_delay: Duration,
    pub temperature: f64,
}

impl ChatEndpointConfig {
    pub fn new(base_url: impl Into<String>, model_name: impl Into<String>) -> Self {
        ChatEndpointConfig {
            base_url: base_url.into(),
            model_name: model_name.into(),
            auth_env: DEFAULT_AUTH_ENV.to_string(),
            timeout: Duration::from_secs(60),
            max_retries: 3,
            max_in_flight: 4,
            retry_base_delay: Duration::from_millis(500),
            temperature: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), GptError> {
        if self.timeout.is_zero() {
            return Err(GptError::InvalidConfig("timeout must be positive".into()));
        }
        if self.max_in_flight == 0 {
            return Err(GptError::InvalidConfig("max_in_flight must be at least 1".into()));
        }
        Ok(())
    }

    pub fn completions_url(&self) -> String {
        let base = self.base_url.trim_end_matches('/');
        if base.ends_with("/chat/completions") {
            base.to_string()
        } else {
            format!("{base}/chat/completions")
        }
    }
}

/// JSON-over-HTTP transport for OpenAI-style chat-completion servers.
pub struct HttpTransport {
    agent: ureq::Agent,
    url: String,
    model: String,
    temperature: f64,
    token: Option<String>,
}

impl HttpTransport {
    pub fn new(cfg: &ChatEndpointConfig) -> Self {
        HttpTransport {
            agent: ureq::AgentBuilder::new().timeout(cfg.timeout).build(),
            url: cfg.completions_url(),
            model: cfg.model_name.clone(),
            temperature: cfg.temperature,
            token: std::env::var(&cfg.auth_env).ok().filter(|t| !t.is_empty()),
        }
    }
}

pub fn request_body(model: &str, prompt: &str, temperature: f64) -> Value {
    json!({
        "model": model,
        "messages": [{"role": "user", "content": prompt}],
        "temperature": temperature,
    })
}

pub fn response_content(body: &Value) -> Option<&str> {
    body.get("choices")?.get(0)?.get("message")?.get("content")?.as_str()
}

impl ChatTransport for HttpTransport {
    fn complete(&self, prompt: &str) -> Result<String, TransportError> {
        let mut req = self.agent.post(&self.url);
        if let Some(token) = &self.token {
            req = req.set("Authorization", &format!("Bearer {token}"));
        }
        let resp = req
            .send_json(request_body(&self.model, prompt, self.temperature))
            .map_err(|e| TransportError(e.to_string()))?;
        let body: Value = resp.into_json().map_err(|e| TransportError(format!("invalid JSON body: {e}")))?;
        response_content(&body)
            .map(str::to_string)
            .ok_or_else(|| TransportError("response has no choices[0].message.content".into()))
    }
}

/// Counting semaphore bounding concurrent requests.
struct Gate {
    free: Mutex<usize>,
    cv: Condvar,
}

struct Permit<'a>(&'a Gate);

impl Gate {
    fn new(n: usize) -> Self {
        Gate { free: Mutex::new(n), cv: Condvar::new() }
    }

    fn acquire(&self) -> Permit<'_> {
        let mut free = self.free.lock().unwrap_or_else(|e| e.into_inner());
        while *free == 0 {
            free = self.cv.wait(free).unwrap_or_else(|e| e.into_inner());
        }
        *free -= 1;
        Permit(self)
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().unwrap_or_else(|e| e.into_inner()) += 1;
        self.0.cv.notify_one();
    }
}

/// Which argument order produced a score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryOrder {
    PredGold,
    GoldPred,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GptScore {
    pub pair: GptScorePair,
    pub pred_gold: GptScorePair,
    pub gold_pred: GptScorePair,
    pub diagnostics: Vec<String>,
}

/// Shareable scorer; safe to call from many threads.
pub struct GptScorer<T> {
    transport: T,
    cfg: ChatEndpointConfig,
    gate: Gate,
    requests: AtomicUsize,
}

impl<T: ChatTransport> GptScorer<T> {
    pub fn new(transport: T, cfg: ChatEndpointConfig) -> Result<Self, GptError> {
        cfg.validate()?;
        let gate = Gate::new(cfg.max_in_flight);
        Ok(GptScorer { transport, cfg, gate, requests: AtomicUsize::new(0) })
    }

    pub fn config(&self) -> &ChatEndpointConfig {
        &self.cfg
    }

    /// Requests sent so far, retries included.
    pub fn request_count(&self) -> usize {
        self.requests.load(Ordering::SeqCst)
    }

    /// One prompt, retried on transport failures and unparsable replies.
    pub fn score_once(&self, table1: &str, table2: &str) -> Result<(GptScorePair, Vec<String>), GptError> {
        let prompt = build_gptscore_prompt(table1, table2);
        let attempts = self.cfg.max_retries + 1;
        let mut last = GptError::EndpointUnavailable { attempts: 0, last_error: String::new() };
        for attempt in 0..attempts {
            if attempt > 0 {
                let factor = 1u32.checked_shl(attempt - 1).unwrap_or(u32::MAX);
                thread::sleep(self.cfg.retry_base_delay.saturating_mul(factor));
            }
            let reply = {
                let _permit = self.gate.acquire();
                self.requests.fetch_add(1, Ordering::SeqCst);
                self.transport.complete(&prompt)
            };
            match reply {
                Ok(text) => match parse_gptscore_response(&text) {
                    Ok(parsed) => return Ok((parsed.pair, parsed.diagnostics)),
                    Err(e) => last = e,
                },
                Err(e) => last = GptError::EndpointUnavailable { attempts: attempt + 1, last_error: e.0 },
            }
        }
        Err(match last {
            GptError::EndpointUnavailable { last_error, .. } => GptError::EndpointUnavailable { attempts, last_error },
            other => other,
        })
    }

    /// Scores `(pred, gold)` and `(gold, pred)` and averages each field.
    pub fn gptscore(&self, pred: &str, gold: &str) -> Result<GptScore, GptError> {
        let first = self.score_once(pred, gold);
        let second = self.score_once(gold, pred);
        match (first, second) {
            (Ok((a, mut da)), Ok((b, db))) => {
                da.extend(db);
                Ok(GptScore { pair: GptScorePair::mean(&a, &b), pred_gold: a, gold_pred: b, diagnostics: da })
            }
            (Ok((a, _)), Err(e)) => {
                Err(GptError::PartialResult { pair: a, succeeded: QueryOrder::PredGold, cause: Box::new(e) })
            }
            (Err(e), Ok((b, _))) => {
                Err(GptError::PartialResult { pair: b, succeeded: QueryOrder::GoldPred, cause: Box::new(e) })
            }
            (Err(e), Err(_)) => Err(e),
        }
    }
}

/// Both-orders score against the HTTP endpoint in `cfg`.
pub fn gptscore(pred: &str, gold: &str, cfg: &ChatEndpointConfig) -> Result<GptScore, GptError> {
    GptScorer::new(HttpTransport::new(cfg), cfg.clone())?.gptscore(pred, gold)
}
