//! Refreshing the KG from model output: ontology-guided prompts, response
//! parsing, triage against the KG and policy-controlled application.

use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

use crate::clock::Clock;
use crate::extraction::Document;
use crate::ontology::Gazetteer;
use crate::rdf::Graph;
use crate::reasoner::{saturate, Rule};

pub mod client;
pub mod prompt;
pub mod response;
pub mod triage;

pub use client::{request, request_all, HttpClient, HttpClientConfig, LlmClient, MockClient, RetryPolicy};
pub use prompt::{
    relation_roster, render_prompt, PromptInstance, PromptOptions, RelationSpec, WORKED_EXAMPLE_TEXT,
    WORKED_EXAMPLE_TRIPLES,
};
pub use response::{parse_response, ParseOptions, ParsedResponse, ParsedTriple, Reject};
pub use triage::{
    apply, triage, ApplyReport, AuditEntry, AuditLog, DiffEntry, DiffReport, Policy, ReviewQueue, LLM_EXTRACTOR,
};

#[derive(Debug, Error)]
pub enum RefreshError {
    #[error("target text is empty")]
    EmptyText,
    #[error("client configuration: {0}")]
    Config(String),
    #[error("transport: {message}")]
    Transport { message: String, transient: bool },
    #[error("HTTP status {status}: {excerpt}")]
    Status { status: u16, excerpt: String },
    #[error("gave up after {attempts} attempts: {last}")]
    RetriesExhausted { attempts: u32, last: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl RefreshError {
    pub fn is_transient(&self) -> bool {
        matches!(self, RefreshError::Transport { transient: true, .. })
    }
}

#[derive(Debug, Clone, Default)]
pub struct RefreshConfig {
    pub prompt: PromptOptions,
    pub parse: ParseOptions,
    pub retry: RetryPolicy,
    pub policy: Policy,
    /// Upper bound on requests in flight.
    pub concurrency: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DocumentRefresh {
    pub doc_id: String,
    pub diff: DiffReport,
    pub applied: ApplyReport,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RefreshOutcome {
    pub documents: Vec<DocumentRefresh>,
    pub queue: ReviewQueue,
    pub audit: AuditLog,
    /// Documents whose request failed, with the error.
    pub failures: Vec<(String, String)>,
}

impl RefreshOutcome {
    pub fn inserted(&self) -> usize {
        self.documents.iter().map(|d| d.applied.inserted.len()).sum()
    }
}

/// Runs the refresh loop over `docs` (sorted by id): prompts are requested
/// with bounded concurrency, then each response is parsed, triaged against
/// the saturated KG and applied in document order.
pub fn refresh_corpus(
    docs: &[Document],
    kg: &mut Graph,
    rules: &[Rule],
    gazetteer: &Gazetteer,
    client: &dyn LlmClient,
    config: &RefreshConfig,
    clock: &Clock,
) -> Result<RefreshOutcome, RefreshError> {
    let mut docs: Vec<&Document> = docs.iter().collect();
    docs.sort_by(|a, b| a.id.cmp(&b.id));
    let prompts = docs
        .iter()
        .map(|d| render_prompt(kg, &d.body, &config.prompt).map(|p| p.render()))
        .collect::<Result<Vec<_>, _>>()?;
    let responses = request_all(client, &prompts, &config.retry, config.concurrency.max(1));
    let mut outcome = RefreshOutcome::default();
    let mut saturation = saturate(kg, rules, clock);
    for (doc, response) in docs.into_iter().zip(responses) {
        let text = match response {
            Ok(t) => t,
            Err(e) => {
                outcome.failures.push((doc.id.clone(), e.to_string()));
                continue;
            }
        };
        let parsed = parse_response(&text, kg, gazetteer, config.parse);
        let diff = triage(&parsed, &saturation, clock);
        let applied = apply(
            &diff,
            kg,
            config.policy,
            &doc.id,
            clock,
            &mut outcome.queue,
            &mut outcome.audit,
        );
        if !applied.inserted.is_empty() {
            let added: Vec<_> = applied
                .inserted
                .iter()
                .map(|t| (t.clone(), kg.provenance(t).cloned()))
                .collect();
            saturation.extend(added, clock);
        }
        outcome.documents.push(DocumentRefresh {
            doc_id: doc.id.clone(),
            diff,
            applied,
        });
    }
    Ok(outcome)
}
