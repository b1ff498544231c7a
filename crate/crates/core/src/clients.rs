//! Offline-first clients for the remote entity resolver and an
//! OpenAI-compatible completion endpoint.
//!
//! All network traffic flows through an injectable [`Transport`], so tests
//! run with stubs or recorded replay files and can assert that no live
//! calls happen. Caches are append-only line-delimited JSON keyed by a
//! request hash.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cases::{CaseRecord, Section};
use crate::kg::{serialize_context, ContextBlock, ContextForm};
use crate::term::TermId;

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("client is disabled")]
    Disabled,
    #[error("remote unavailable: {0}")]
    RemoteUnavailable(String),
    #[error("malformed response: {0}")]
    MalformedResponse(String),
    #[error("endpoint unavailable: {0}")]
    EndpointUnavailable(String),
    #[error("no replay entry for request hash {0}")]
    ReplayMiss(String),
    #[error("output remains unparseable after extraction")]
    StillUnparseable,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache record malformed: {0}")]
    BadCache(String),
}

/// One HTTP exchange as the clients see it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpRequest {
    pub method: String,
    pub url: String,
    pub body: String,
    /// Bearer token, when the endpoint requires one. Deliberately not part
    /// of the request hash so replay files never depend on secrets.
    pub bearer_token: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
}

/// The seam between clients and the network.
pub trait Transport: Send + Sync {
    fn send(&self, request: &HttpRequest) -> Result<HttpResponse, ClientError>;
}

/// Transport that refuses every call; the default when networking is off.
pub struct NoNetwork;

impl Transport for NoNetwork {
    fn send(&self, request: &HttpRequest) -> Result<HttpResponse, ClientError> {
        Err(ClientError::RemoteUnavailable(format!(
            "networking disabled (attempted {} {})",
            request.method, request.url
        )))
    }
}

/// Canned-response transport for tests; counts the calls it serves.
pub struct StubTransport {
    responses: Mutex<Vec<HttpResponse>>,
    pub calls: AtomicUsize,
}

impl StubTransport {
    pub fn new(responses: Vec<HttpResponse>) -> Self {
        StubTransport {
            responses: Mutex::new(responses),
            calls: AtomicUsize::new(0),
        }
    }

    pub fn call_count(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }
}

impl Transport for StubTransport {
    fn send(&self, _request: &HttpRequest) -> Result<HttpResponse, ClientError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        let mut responses = self.responses.lock().expect("stub lock");
        if responses.is_empty() {
            return Err(ClientError::RemoteUnavailable("stub exhausted".to_string()));
        }
        Ok(responses.remove(0))
    }
}

fn request_hash(request: &HttpRequest) -> String {
    let mut hasher = Sha256::new();
    hasher.update(request.method.as_bytes());
    hasher.update(b"\n");
    hasher.update(request.url.as_bytes());
    hasher.update(b"\n");
    hasher.update(request.body.as_bytes());
    hex::encode(hasher.finalize())
}

#[derive(Serialize, Deserialize)]
struct CacheRecord {
    request_hash: String,
    response: String,
}

/// Append-only request-hash -> response-body store backing both clients.
pub struct ReplayCache {
    path: Option<PathBuf>,
    entries: Mutex<BTreeMap<String, String>>,
}

impl ReplayCache {
    pub fn in_memory() -> Self {
        ReplayCache {
            path: None,
            entries: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn open(path: &Path) -> Result<Self, ClientError> {
        let mut entries = BTreeMap::new();
        if path.exists() {
            let file = std::fs::File::open(path)?;
            for line in BufReader::new(file).lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let record: CacheRecord = serde_json::from_str(&line)
                    .map_err(|e| ClientError::BadCache(e.to_string()))?;
                entries.insert(record.request_hash, record.response);
            }
        }
        Ok(ReplayCache {
            path: Some(path.to_path_buf()),
            entries: Mutex::new(entries),
        })
    }

    pub fn get(&self, hash: &str) -> Option<String> {
        self.entries.lock().expect("cache lock").get(hash).cloned()
    }

    pub fn put(&self, hash: &str, response: &str) -> Result<(), ClientError> {
        let mut entries = self.entries.lock().expect("cache lock");
        if entries.contains_key(hash) {
            return Ok(());
        }
        entries.insert(hash.to_string(), response.to_string());
        if let Some(path) = &self.path {
            let mut file = std::fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)?;
            let record = CacheRecord {
                request_hash: hash.to_string(),
                response: response.to_string(),
            };
            let line = serde_json::to_string(&record).expect("record serializes");
            writeln!(file, "{line}")?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone)]
pub struct ResolverConfig {
    pub base_url: String,
    pub enabled: bool,
}

impl Default for ResolverConfig {
    fn default() -> Self {
        ResolverConfig {
            base_url: "https://api-v3.monarchinitiative.org/v3/api".to_string(),
            enabled: false,
        }
    }
}

impl ResolverConfig {
    /// Defaults with `RAREKG_RESOLVER_URL` applied when set.
    pub fn from_env() -> Self {
        let mut config = ResolverConfig::default();
        if let Ok(url) = std::env::var("RAREKG_RESOLVER_URL") {
            config.base_url = url;
        }
        config
    }
}

/// Remote disease-name resolver with a replayable cache in front of it.
pub struct ResolverClient<'a> {
    config: ResolverConfig,
    transport: &'a dyn Transport,
    cache: &'a ReplayCache,
}

impl<'a> ResolverClient<'a> {
    pub fn new(
        config: ResolverConfig,
        transport: &'a dyn Transport,
        cache: &'a ReplayCache,
    ) -> Self {
        ResolverClient {
            config,
            transport,
            cache,
        }
    }

    /// Resolves a natural-language disease label to an ORPHA id. Cache
    /// hits never touch the network; a disabled client is an error before
    /// any I/O.
    pub fn resolve_remote(&self, label: &str) -> Result<Option<TermId>, ClientError> {
        if !self.config.enabled {
            return Err(ClientError::Disabled);
        }
        let request = HttpRequest {
            method: "GET".to_string(),
            url: format!(
                "{}/search?q={}&in_taxon_label=&category=biolink%3ADisease",
                self.config.base_url,
                urlencode(label)
            ),
            body: String::new(),
            bearer_token: None,
        };
        let hash = request_hash(&request);
        let body = match self.cache.get(&hash) {
            Some(body) => body,
            None => {
                let response = self.transport.send(&request)?;
                if response.status >= 500 {
                    return Err(ClientError::RemoteUnavailable(format!(
                        "status {}",
                        response.status
                    )));
                }
                self.cache.put(&hash, &response.body)?;
                response.body
            }
        };
        extract_orpha_hit(&body)
    }
}

/// First ORPHA-mapped hit from a resolver search payload.
fn extract_orpha_hit(body: &str) -> Result<Option<TermId>, ClientError> {
    #[derive(Deserialize)]
    struct SearchResponse {
        #[serde(default)]
        items: Vec<SearchItem>,
    }
    #[derive(Deserialize)]
    struct SearchItem {
        id: String,
    }
    let parsed: SearchResponse = serde_json::from_str(body)
        .map_err(|e| ClientError::MalformedResponse(e.to_string()))?;
    for item in parsed.items {
        if let Ok(id) = item.id.parse::<TermId>() {
            if id.namespace() == crate::term::Namespace::Orpha {
                return Ok(Some(id));
            }
        }
    }
    Ok(None)
}

fn urlencode(s: &str) -> String {
    let mut out = String::new();
    for b in s.bytes() {
        match b {
            b'a'..=b'z' | b'A'..=b'Z' | b'0'..=b'9' | b'-' | b'_' | b'.' | b'~' => {
                out.push(b as char)
            }
            b' ' => out.push_str("%20"),
            _ => out.push_str(&format!("%{b:02X}")),
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct LlmEndpointConfig {
    pub base_url: String,
    pub model: String,
    pub max_tokens: usize,
    pub temperature: f64,
    pub api_key: Option<String>,
}

impl Default for LlmEndpointConfig {
    fn default() -> Self {
        LlmEndpointConfig {
            base_url: "http://localhost:8000/v1".to_string(),
            model: "default".to_string(),
            max_tokens: 2048,
            temperature: 0.0,
            api_key: None,
        }
    }
}

impl LlmEndpointConfig {
    /// Defaults with `RAREKG_LLM_URL` / `RAREKG_LLM_KEY` applied when set.
    pub fn from_env() -> Self {
        let mut config = LlmEndpointConfig::default();
        if let Ok(url) = std::env::var("RAREKG_LLM_URL") {
            config.base_url = url;
        }
        if let Ok(key) = std::env::var("RAREKG_LLM_KEY") {
            config.api_key = Some(key);
        }
        config
    }
}

/// OpenAI-compatible chat client with the same cache/replay seam as the
/// resolver.
pub struct LlmClient<'a> {
    config: LlmEndpointConfig,
    transport: &'a dyn Transport,
    cache: &'a ReplayCache,
    /// In replay mode a cache miss is an error rather than a network call.
    pub replay_only: bool,
}

const EXTRACTION_PROMPT: &str = "Identify and output only the disease entities mentioned in the \
text below, one per line as a numbered list, ignoring reasoning and unrelated text. Output \
nothing else.";

impl<'a> LlmClient<'a> {
    pub fn new(
        config: LlmEndpointConfig,
        transport: &'a dyn Transport,
        cache: &'a ReplayCache,
    ) -> Self {
        LlmClient {
            config,
            transport,
            cache,
            replay_only: false,
        }
    }

    /// Deterministic prompt for context-augmented diagnosis: the sectioned
    /// case text followed by the serialized context block, verbatim.
    pub fn diagnosis_prompt(case: &CaseRecord, context: &ContextBlock) -> String {
        let mut prompt = String::new();
        prompt.push_str("You are assisting with rare disease differential diagnosis.\n");
        prompt.push_str("Patient record:\n");
        for &section in &Section::ALL {
            let text = case.section(section);
            if !text.trim().is_empty() {
                prompt.push_str(&format!("## {}\n{}\n", section.as_str(), text));
            }
        }
        if !case.phenotypes.is_empty() {
            let ids: Vec<String> = case.phenotypes.iter().map(|p| p.to_string()).collect();
            prompt.push_str(&format!("## phenotypes\n{}\n", ids.join(", ")));
        }
        prompt.push_str("Retrieved knowledge:\n");
        prompt.push_str(
            std::str::from_utf8(&serialize_context(context, ContextForm::Text))
                .expect("context text is utf-8"),
        );
        prompt.push_str(
            "List the top 20 most probable diagnoses as a numbered list, most likely first.\n",
        );
        prompt
    }

    fn complete(&self, prompt: &str, temperature: f64) -> Result<String, ClientError> {
        let body = serde_json::json!({
            "model": self.config.model,
            "max_tokens": self.config.max_tokens,
            "temperature": temperature,
            "messages": [{"role": "user", "content": prompt}],
        })
        .to_string();
        let request = HttpRequest {
            method: "POST".to_string(),
            url: format!("{}/chat/completions", self.config.base_url),
            body,
            bearer_token: self.config.api_key.clone(),
        };
        let hash = request_hash(&request);
        if let Some(cached) = self.cache.get(&hash) {
            return Ok(cached);
        }
        if self.replay_only {
            return Err(ClientError::ReplayMiss(hash));
        }
        let response = self
            .transport
            .send(&request)
            .map_err(|e| ClientError::EndpointUnavailable(e.to_string()))?;
        if response.status != 200 {
            return Err(ClientError::EndpointUnavailable(format!(
                "status {}",
                response.status
            )));
        }
        let completion = extract_completion_text(&response.body)?;
        self.cache.put(&hash, &completion)?;
        Ok(completion)
    }

    /// Context-augmented diagnosis. Returns the raw completion text.
    pub fn augmented_diagnose(
        &self,
        case: &CaseRecord,
        context: &ContextBlock,
    ) -> Result<String, ClientError> {
        let prompt = Self::diagnosis_prompt(case, context);
        self.complete(&prompt, self.config.temperature)
    }

    /// Fallback structured extraction when rule-based list parsing failed.
    /// Extraction always runs at temperature 0; the result is capped at 20
    /// labels.
    pub fn extract_list_via_llm(&self, raw_output: &str) -> Result<Vec<String>, ClientError> {
        if raw_output.trim().is_empty() {
            return Err(ClientError::StillUnparseable);
        }
        let prompt = format!("{EXTRACTION_PROMPT}\n\n{raw_output}");
        let completion = self.complete(&prompt, 0.0)?;
        match crate::eval::parse_prediction_list(&completion) {
            Ok(items) => Ok(items.into_iter().map(|(_, label)| label).collect()),
            Err(_) => Err(ClientError::StillUnparseable),
        }
    }
}

fn extract_completion_text(body: &str) -> Result<String, ClientError> {
    #[derive(Deserialize)]
    struct ChatResponse {
        choices: Vec<Choice>,
    }
    #[derive(Deserialize)]
    struct Choice {
        message: Message,
    }
    #[derive(Deserialize)]
    struct Message {
        content: String,
    }
    let parsed: ChatResponse = serde_json::from_str(body)
        .map_err(|e| ClientError::MalformedResponse(e.to_string()))?;
    parsed
        .choices
        .into_iter()
        .next()
        .map(|c| c.message.content)
        .ok_or_else(|| ClientError::MalformedResponse("no choices".to_string()))
}
