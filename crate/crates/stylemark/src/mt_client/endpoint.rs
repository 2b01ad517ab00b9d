//! Chat-completion endpoints: the HTTP client, a deterministic offline
//! mock, and the shared rate limiter.

use std::collections::{HashMap, VecDeque};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::Deserialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::{EndpointConfig, MtError};

/// How a completion attempt failed; drives retry classification.
#[derive(Debug, Error)]
pub enum CompletionError {
    #[error("authentication rejected: {0}")]
    Auth(String),
    #[error("transient failure: {0}")]
    Transient(String),
    #[error("request failed: {0}")]
    Fatal(String),
}

/// A chat-completion backend: one user message in, assistant text out.
pub trait ChatCompletion: Send + Sync {
    fn complete(&self, prompt: &str) -> Result<String, CompletionError>;
}

/// Sliding-window limiter for a per-minute request budget, shared across
/// worker threads.
pub struct RateLimiter {
    per_minute: u32,
    stamps: Mutex<VecDeque<Instant>>,
}

impl RateLimiter {
    pub fn new(per_minute: u32) -> RateLimiter {
        RateLimiter { per_minute: per_minute.max(1), stamps: Mutex::new(VecDeque::new()) }
    }

    /// Blocks until a request slot is free, then claims it.
    pub fn acquire(&self) {
        loop {
            let wait = {
                let mut stamps = self.stamps.lock().unwrap();
                let now = Instant::now();
                while stamps
                    .front()
                    .is_some_and(|t| now.duration_since(*t) >= Duration::from_secs(60))
                {
                    stamps.pop_front();
                }
                if (stamps.len() as u32) < self.per_minute {
                    stamps.push_back(now);
                    return;
                }
                Duration::from_secs(60) - now.duration_since(*stamps.front().unwrap())
            };
            std::thread::sleep(wait.min(Duration::from_millis(250)));
        }
    }
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<ChatChoice>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChatMessage,
}

#[derive(Deserialize)]
struct ChatMessage {
    content: String,
}

/// Extracts the assistant text from a chat-completion response body.
pub fn parse_chat_response(body: &str) -> Result<String, CompletionError> {
    let parsed: ChatResponse = serde_json::from_str(body)
        .map_err(|e| CompletionError::Fatal(format!("unexpected response shape: {e}")))?;
    parsed
        .choices
        .into_iter()
        .next()
        .map(|c| c.message.content)
        .ok_or_else(|| CompletionError::Fatal("response has no choices".to_string()))
}

/// Live HTTP endpoint speaking the chat-completion wire shape with
/// bearer-token auth. The API key is read from the environment variable
/// named in the config when the endpoint is constructed.
pub struct HttpEndpoint {
    config: EndpointConfig,
    api_key: String,
    client: reqwest::blocking::Client,
    limiter: RateLimiter,
}

impl HttpEndpoint {
    pub fn new(config: EndpointConfig) -> Result<HttpEndpoint, MtError> {
        let api_key = std::env::var(&config.api_key_env)
            .map_err(|_| MtError::MissingApiKey(config.api_key_env.clone()))?;
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(config.timeout_secs))
            .build()
            .map_err(|e| MtError::Endpoint {
                attempts: 0,
                source: CompletionError::Fatal(e.to_string()),
            })?;
        let limiter = RateLimiter::new(config.requests_per_minute);
        Ok(HttpEndpoint { config, api_key, client, limiter })
    }
}

impl ChatCompletion for HttpEndpoint {
    fn complete(&self, prompt: &str) -> Result<String, CompletionError> {
        self.limiter.acquire();
        let url = format!("{}/chat/completions", self.config.base_url.trim_end_matches('/'));
        let body = json!({
            "model": self.config.model_name,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.config.temperature,
        });
        let response = self
            .client
            .post(&url)
            .bearer_auth(&self.api_key)
            .json(&body)
            .send()
            .map_err(|e| {
                if e.is_timeout() || e.is_connect() {
                    CompletionError::Transient(e.to_string())
                } else {
                    CompletionError::Fatal(e.to_string())
                }
            })?;
        let status = response.status();
        let text = response
            .text()
            .map_err(|e| CompletionError::Transient(e.to_string()))?;
        if status.as_u16() == 401 || status.as_u16() == 403 {
            return Err(CompletionError::Auth(format!("{status}: {text}")));
        }
        if status.as_u16() == 408 || status.as_u16() == 429 || status.is_server_error() {
            return Err(CompletionError::Transient(format!("{status}: {text}")));
        }
        if !status.is_success() {
            return Err(CompletionError::Fatal(format!("{status}: {text}")));
        }
        parse_chat_response(&text)
    }
}

fn prompt_hash(prompt: &str) -> String {
    let digest = Sha256::digest(prompt.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Deterministic offline endpoint for tests and dry runs. Outputs are
/// looked up by prompt hash; unscripted prompts synthesize a stable
/// output derived from the hash. Transient failures can be scripted per
/// prompt to exercise retry and resume paths.
pub struct MockEndpoint {
    canned: Mutex<HashMap<String, String>>,
    failures: Mutex<HashMap<String, u32>>,
    calls: Mutex<Vec<String>>,
    synthesize: bool,
    reject_auth: bool,
}

impl MockEndpoint {
    pub fn new() -> MockEndpoint {
        MockEndpoint {
            canned: Mutex::new(HashMap::new()),
            failures: Mutex::new(HashMap::new()),
            calls: Mutex::new(Vec::new()),
            synthesize: true,
            reject_auth: false,
        }
    }

    /// A mock that fails every call with an authentication error.
    pub fn rejecting_auth() -> MockEndpoint {
        MockEndpoint { reject_auth: true, ..MockEndpoint::new() }
    }

    /// Scripts the canned output for one exact prompt.
    pub fn script_output(&self, prompt: &str, output: impl Into<String>) {
        self.canned.lock().unwrap().insert(prompt_hash(prompt), output.into());
    }

    /// Makes the next `times` calls with this exact prompt fail
    /// transiently.
    pub fn script_transient_failures(&self, prompt: &str, times: u32) {
        self.failures.lock().unwrap().insert(prompt_hash(prompt), times);
    }

    /// The deterministic output this mock synthesizes for a prompt.
    pub fn synthesized_output(&self, prompt: &str) -> String {
        format!("MOCK[{}]", &prompt_hash(prompt)[..16])
    }

    /// Number of completion calls made so far.
    pub fn call_count(&self) -> usize {
        self.calls.lock().unwrap().len()
    }

    /// Every prompt received, in call order.
    pub fn prompts_seen(&self) -> Vec<String> {
        self.calls.lock().unwrap().clone()
    }
}

impl Default for MockEndpoint {
    fn default() -> Self {
        MockEndpoint::new()
    }
}

impl ChatCompletion for MockEndpoint {
    fn complete(&self, prompt: &str) -> Result<String, CompletionError> {
        self.calls.lock().unwrap().push(prompt.to_string());
        if self.reject_auth {
            return Err(CompletionError::Auth("mock rejects all keys".to_string()));
        }
        let hash = prompt_hash(prompt);
        {
            let mut failures = self.failures.lock().unwrap();
            if let Some(left) = failures.get_mut(&hash) {
                if *left > 0 {
                    *left -= 1;
                    return Err(CompletionError::Transient("scripted failure".to_string()));
                }
            }
        }
        if let Some(out) = self.canned.lock().unwrap().get(&hash) {
            return Ok(out.clone());
        }
        if self.synthesize {
            Ok(self.synthesized_output(prompt))
        } else {
            Err(CompletionError::Fatal(format!("unscripted prompt {hash}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_standard_chat_response() {
        let body = r#"{"id":"x","choices":[{"index":0,"message":{"role":"assistant","content":"Hello there."},"finish_reason":"stop"}]}"#;
        assert_eq!(parse_chat_response(body).unwrap(), "Hello there.");
    }

    #[test]
    fn empty_choices_is_fatal() {
        let body = r#"{"choices":[]}"#;
        assert!(matches!(
            parse_chat_response(body),
            Err(CompletionError::Fatal(_))
        ));
    }

    #[test]
    fn garbage_body_is_fatal() {
        assert!(matches!(
            parse_chat_response("no json here"),
            Err(CompletionError::Fatal(_))
        ));
    }

    #[test]
    fn mock_is_deterministic_and_scriptable() {
        let mock = MockEndpoint::new();
        let a = mock.complete("prompt one").unwrap();
        let b = mock.complete("prompt one").unwrap();
        assert_eq!(a, b);
        mock.script_output("prompt one", "canned");
        assert_eq!(mock.complete("prompt one").unwrap(), "canned");
        assert_eq!(mock.call_count(), 3);
        assert_eq!(mock.prompts_seen()[0], "prompt one");
    }

    #[test]
    fn scripted_failures_run_out() {
        let mock = MockEndpoint::new();
        mock.script_transient_failures("p", 2);
        assert!(mock.complete("p").is_err());
        assert!(mock.complete("p").is_err());
        assert!(mock.complete("p").is_ok());
    }

    #[test]
    fn rate_limiter_admits_within_budget_immediately() {
        let limiter = RateLimiter::new(1000);
        let start = Instant::now();
        for _ in 0..50 {
            limiter.acquire();
        }
        assert!(start.elapsed() < Duration::from_millis(100));
    }
}
