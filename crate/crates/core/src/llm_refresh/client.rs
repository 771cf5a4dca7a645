//! Model clients: a deterministic mock and an HTTP chat-completion client,
//! plus retry with exponential backoff.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::RefreshError;

/// Environment variable holding the endpoint URL.
pub const ENV_ENDPOINT: &str = "ONCONET_LLM_ENDPOINT";
/// Default environment variable holding the credential.
pub const ENV_API_KEY: &str = "ONCONET_LLM_API_KEY";
/// Environment variable holding the model name.
pub const ENV_MODEL: &str = "ONCONET_LLM_MODEL";

pub trait LlmClient: Send + Sync {
    /// Identifier recorded in audit entries.
    fn id(&self) -> &str;

    /// One completion attempt.
    fn complete(&self, prompt: &str) -> Result<String, RefreshError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetryPolicy {
    pub max_retries: u32,
    pub initial_backoff: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_retries: 3,
            initial_backoff: Duration::from_millis(500),
        }
    }
}

/// Calls the client, retrying transient transport failures with doubling
/// delays. Returns the text and the number of retries used.
pub fn request(client: &dyn LlmClient, prompt: &str, policy: &RetryPolicy) -> Result<(String, u32), RefreshError> {
    let mut delay = policy.initial_backoff;
    let mut attempt = 0;
    loop {
        match client.complete(prompt) {
            Ok(text) => return Ok((text, attempt)),
            Err(e) if e.is_transient() && attempt < policy.max_retries => {
                attempt += 1;
                thread::sleep(delay);
                delay = delay.saturating_mul(2);
            }
            Err(e) if e.is_transient() => {
                return Err(RefreshError::RetriesExhausted {
                    attempts: attempt + 1,
                    last: e.to_string(),
                })
            }
            Err(e) => return Err(e),
        }
    }
}

/// Sends prompts with at most `concurrency` requests in flight. Results are
/// returned in prompt order.
pub fn request_all(
    client: &dyn LlmClient,
    prompts: &[String],
    policy: &RetryPolicy,
    concurrency: usize,
) -> Vec<Result<String, RefreshError>> {
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<String, RefreshError>>>> =
        Mutex::new((0..prompts.len()).map(|_| None).collect());
    thread::scope(|scope| {
        for _ in 0..concurrency.clamp(1, prompts.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= prompts.len() {
                    break;
                }
                let r = request(client, &prompts[i], policy).map(|(t, _)| t);
                results.lock().expect("results lock")[i] = Some(r);
            });
        }
    });
    results
        .into_inner()
        .expect("results lock")
        .into_iter()
        .map(|r| r.expect("every prompt answered"))
        .collect()
}

/// Canned responses. The first rule whose needle occurs in the prompt
/// answers; otherwise the default. Optional injected transient failures
/// precede the first answer.
#[derive(Debug, Default)]
pub struct MockClient {
    rules: Vec<(String, String)>,
    default: String,
    failures_left: AtomicUsize,
    calls: AtomicUsize,
}

impl MockClient {
    pub fn new(default: impl Into<String>) -> Self {
        MockClient {
            default: default.into(),
            ..Default::default()
        }
    }

    pub fn with_rule(mut self, needle: impl Into<String>, response: impl Into<String>) -> Self {
        self.rules.push((needle.into(), response.into()));
        self
    }

    /// The next `n` calls fail with a transient timeout.
    pub fn with_transient_failures(self, n: usize) -> Self {
        self.failures_left.store(n, Ordering::SeqCst);
        self
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }
}

impl LlmClient for MockClient {
    fn id(&self) -> &str {
        "mock"
    }

    fn complete(&self, prompt: &str) -> Result<String, RefreshError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        let failing = self
            .failures_left
            .fetch_update(Ordering::SeqCst, Ordering::SeqCst, |n| n.checked_sub(1))
            .is_ok();
        if failing {
            return Err(RefreshError::Transport {
                message: "injected timeout".into(),
                transient: true,
            });
        }
        Ok(self
            .rules
            .iter()
            .find(|(needle, _)| prompt.contains(needle.as_str()))
            .map_or(&self.default, |(_, r)| r)
            .clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HttpClientConfig {
    pub endpoint: String,
    pub model: String,
    /// Name of the environment variable holding the credential.
    pub credential_env: String,
    pub temperature: f64,
    pub timeout: Duration,
}

impl HttpClientConfig {
    /// Reads endpoint and model from the environment.
    pub fn from_env() -> Result<Self, RefreshError> {
        let get = |k: &str| std::env::var(k).map_err(|_| RefreshError::Config(format!("{k} is not set")));
        Ok(HttpClientConfig {
            endpoint: get(ENV_ENDPOINT)?,
            model: get(ENV_MODEL)?,
            credential_env: ENV_API_KEY.to_owned(),
            temperature: 0.0,
            timeout: Duration::from_secs(60),
        })
    }
}

/// Chat-completion client: posts `{model, temperature, messages}` and
/// reads `choices[0].message.content`.
#[derive(Debug)]
pub struct HttpClient {
    id: String,
    config: HttpClientConfig,
    credential: String,
    agent: ureq::Agent,
}

impl HttpClient {
    /// Fails with a configuration error, before any network activity, when
    /// the credential variable is unset or empty.
    pub fn new(config: HttpClientConfig) -> Result<Self, RefreshError> {
        let credential = std::env::var(&config.credential_env)
            .ok()
            .filter(|c| !c.is_empty())
            .ok_or_else(|| RefreshError::Config(format!("credential variable {} is not set", config.credential_env)))?;
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(config.timeout))
            .http_status_as_error(false)
            .build()
            .into();
        Ok(HttpClient {
            id: format!("http:{}", config.model),
            config,
            credential,
            agent,
        })
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

impl LlmClient for HttpClient {
    fn id(&self) -> &str {
        &self.id
    }

    fn complete(&self, prompt: &str) -> Result<String, RefreshError> {
        let body = json!({
            "model": self.config.model,
            "temperature": self.config.temperature,
            "messages": [{"role": "user", "content": prompt}],
        });
        let mut resp = self
            .agent
            .post(&self.config.endpoint)
            .header("Authorization", &format!("Bearer {}", self.credential))
            .send_json(&body)
            .map_err(|e| RefreshError::Transport {
                message: e.to_string(),
                transient: true,
            })?;
        let status = resp.status().as_u16();
        let text = resp.body_mut().read_to_string().map_err(|e| RefreshError::Transport {
            message: e.to_string(),
            transient: true,
        })?;
        if !(200..300).contains(&status) {
            let excerpt: String = text.chars().take(200).collect();
            if status == 429 || status >= 500 {
                return Err(RefreshError::Transport {
                    message: format!("HTTP {status}: {excerpt}"),
                    transient: true,
                });
            }
            return Err(RefreshError::Status { status, excerpt });
        }
        let parsed: ChatResponse = serde_json::from_str(&text)
            .map_err(|e| RefreshError::Status { status, excerpt: format!("unreadable body: {e}") })?;
        parsed
            .choices
            .into_iter()
            .next()
            .map(|c| c.message.content)
            .ok_or_else(|| RefreshError::Status {
                status,
                excerpt: "response has no choices".into(),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fast() -> RetryPolicy {
        RetryPolicy {
            max_retries: 3,
            initial_backoff: Duration::ZERO,
        }
    }

    #[test]
    fn mock_returns_canned_text_verbatim() {
        let canned = "TP53|causes|Breast Cancer\nTP53|hasType|POTSF\nBreast Cancer|isA|Disease\nPOTSF|hasEvidence|PubMed";
        let c = MockClient::new(canned);
        assert_eq!(request(&c, "anything", &fast()).unwrap(), (canned.to_owned(), 0));
    }

    #[test]
    fn retries_after_two_timeouts() {
        let c = MockClient::new("ok").with_transient_failures(2);
        assert_eq!(request(&c, "p", &fast()).unwrap(), ("ok".to_owned(), 2));
        assert_eq!(c.calls(), 3);
    }

    #[test]
    fn exhausted_retries() {
        let c = MockClient::new("ok").with_transient_failures(10);
        let err = request(&c, "p", &fast()).unwrap_err();
        assert!(matches!(err, RefreshError::RetriesExhausted { attempts: 4, .. }));
    }

    #[test]
    fn rules_pick_response_by_prompt() {
        let c = MockClient::new("none").with_rule("FAS", "fas answer");
        assert_eq!(c.complete("about FAS").unwrap(), "fas answer");
        assert_eq!(c.complete("about TP53").unwrap(), "none");
    }

    #[test]
    fn missing_credential_is_a_config_error() {
        let cfg = HttpClientConfig {
            endpoint: "http://127.0.0.1:9/never".into(),
            model: "m".into(),
            credential_env: "ONCONET_TEST_SURELY_UNSET_KEY".into(),
            temperature: 0.0,
            timeout: Duration::from_secs(1),
        };
        assert!(matches!(HttpClient::new(cfg), Err(RefreshError::Config(_))));
    }

    #[test]
    fn bounded_concurrency_keeps_order() {
        let c = MockClient::new("d").with_rule("one", "1").with_rule("two", "2");
        let prompts = vec!["one".to_owned(), "two".to_owned(), "three".to_owned()];
        let out: Vec<String> = request_all(&c, &prompts, &fast(), 2).into_iter().map(Result::unwrap).collect();
        assert_eq!(out, ["1", "2", "d"]);
    }
}
