//! Chat transports: recorded-fixture replay, a live HTTP endpoint, and a
//! retry/timeout wrapper around either.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{mpsc, Arc};
use std::thread;
use std::time::Duration;

use modelsync_core::llm::{ChatExchange, ChatMessage};
use modelsync_core::{ChatRequest, ChatResponse, Transport, TransportError};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const KEY_VAR: &str = "MODELSYNC_LLM_KEY";

#[derive(Debug, Serialize, Deserialize)]
struct WireMessage {
    role: String,
    content: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct WireRequest {
    model: String,
    temperature: f64,
    messages: Vec<WireMessage>,
}

#[derive(Debug, Serialize, Deserialize)]
struct WireResponse {
    content: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct WireExchange {
    key: String,
    request: WireRequest,
    response: WireResponse,
}

impl From<&ChatRequest> for WireRequest {
    fn from(r: &ChatRequest) -> Self {
        Self {
            model: r.model.clone(),
            temperature: r.temperature,
            messages: r.messages.iter().map(|m| WireMessage { role: m.role.clone(), content: m.content.clone() }).collect(),
        }
    }
}

impl From<WireRequest> for ChatRequest {
    fn from(r: WireRequest) -> Self {
        Self {
            model: r.model,
            temperature: r.temperature,
            messages: r.messages.into_iter().map(|m| ChatMessage { role: m.role, content: m.content }).collect(),
        }
    }
}

pub fn exchange_to_json(x: &ChatExchange) -> String {
    let wire = WireExchange {
        key: x.key.clone(),
        request: (&x.request).into(),
        response: WireResponse { content: x.response.content.clone() },
    };
    let mut s = serde_json::to_string_pretty(&wire).expect("exchange serializes");
    s.push('\n');
    s
}

pub fn exchange_from_json(text: &str) -> Result<ChatExchange, String> {
    let w: WireExchange = serde_json::from_str(text).map_err(|e| e.to_string())?;
    Ok(ChatExchange { key: w.key, request: w.request.into(), response: ChatResponse { content: w.response.content } })
}

/// Replays exchanges recorded as `*.json` files in one directory.
#[derive(Debug)]
pub struct FixtureTransport {
    exchanges: BTreeMap<String, ChatResponse>,
}

impl FixtureTransport {
    pub fn open(dir: &Path) -> Result<Self, CliError> {
        let mut exchanges = BTreeMap::new();
        let entries = fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
        let mut paths: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        for path in paths {
            let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            let x = exchange_from_json(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            // a key that no longer matches its request means the template changed
            if x.key != x.request.fingerprint() {
                return Err(CliError::Config(format!("{}: stale fixture, key does not match request", path.display())));
            }
            exchanges.insert(x.key, x.response);
        }
        Ok(Self { exchanges })
    }

    pub fn len(&self) -> usize {
        self.exchanges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exchanges.is_empty()
    }
}

impl Transport for FixtureTransport {
    fn send(&self, request: &ChatRequest) -> Result<ChatResponse, TransportError> {
        let key = request.fingerprint();
        self.exchanges.get(&key).cloned().ok_or(TransportError::NoFixture { key })
    }
}

/// OpenAI-style chat-completions endpoint authenticated by [`KEY_VAR`].
pub struct HttpTransport {
    client: reqwest::blocking::Client,
    endpoint: String,
    key: String,
}

impl HttpTransport {
    pub fn from_env(endpoint: &str, timeout: Duration) -> Result<Self, TransportError> {
        let key = std::env::var(KEY_VAR).map_err(|_| TransportError::Failed(format!("{KEY_VAR} is not set")))?;
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| TransportError::Failed(e.to_string()))?;
        Ok(Self { client, endpoint: endpoint.to_owned(), key })
    }
}

#[derive(Deserialize)]
struct Completion {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: WireMessage,
}

impl Transport for HttpTransport {
    fn send(&self, request: &ChatRequest) -> Result<ChatResponse, TransportError> {
        let body = WireRequest::from(request);
        let resp = self
            .client
            .post(&self.endpoint)
            .bearer_auth(&self.key)
            .json(&body)
            .send()
            .map_err(|e| if e.is_timeout() { TransportError::Timeout { attempts: 1 } } else { TransportError::Failed(e.to_string()) })?;
        let status = resp.status();
        if !status.is_success() {
            let text = resp.text().unwrap_or_default();
            return Err(TransportError::Failed(format!("endpoint answered {status}: {text}")));
        }
        let c: Completion = resp.json().map_err(|e| TransportError::Failed(format!("malformed completion: {e}")))?;
        let first = c.choices.into_iter().next().ok_or_else(|| TransportError::Failed("completion has no choices".into()))?;
        Ok(ChatResponse { content: first.message.content })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub attempts: u32,
    pub backoff: Duration,
    pub timeout: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self { attempts: 3, backoff: Duration::from_secs(1), timeout: Duration::from_secs(30) }
    }
}

/// Bounds every request by `timeout` and retries failures with doubling
/// backoff. A missing fixture is not retried.
pub struct Retrying<T> {
    inner: Arc<T>,
    policy: RetryPolicy,
}

impl<T: Transport + Send + Sync + 'static> Retrying<T> {
    pub fn new(inner: T, policy: RetryPolicy) -> Self {
        Self { inner: Arc::new(inner), policy }
    }

    fn attempt(&self, request: &ChatRequest) -> Result<ChatResponse, TransportError> {
        let (tx, rx) = mpsc::channel();
        let inner = Arc::clone(&self.inner);
        let request = request.clone();
        // a request still running at the deadline is abandoned, not joined
        thread::spawn(move || {
            let _ = tx.send(inner.send(&request));
        });
        match rx.recv_timeout(self.policy.timeout) {
            Ok(r) => r,
            Err(_) => Err(TransportError::Timeout { attempts: 1 }),
        }
    }
}

impl<T: Transport + Send + Sync + 'static> Transport for Retrying<T> {
    fn send(&self, request: &ChatRequest) -> Result<ChatResponse, TransportError> {
        let mut delay = self.policy.backoff;
        let mut last = TransportError::Failed("no attempt made".into());
        for n in 1..=self.policy.attempts.max(1) {
            match self.attempt(request) {
                Ok(r) => return Ok(r),
                Err(e @ TransportError::NoFixture { .. }) => return Err(e),
                Err(TransportError::Timeout { .. }) => last = TransportError::Timeout { attempts: n },
                Err(e) => last = e,
            }
            if n < self.policy.attempts {
                thread::sleep(delay);
                delay *= 2;
            }
        }
        Err(last)
    }
}
