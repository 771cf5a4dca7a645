//! Wire protocol for external recognisers and relation classifiers.
//!
//! One request and one response per document, each a single JSON line.
//! Offsets in responses are byte offsets into the sentence text.

use std::io::{BufRead, BufReader, Write};
use std::process::{Command, Stdio};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::ontology::EntityCategory;

use super::recognize::{tags_to_spans, Candidate, Mention, Tag};
use super::relations::Relation;
use super::segment::Sentence;
use super::ExtractionError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RequestSentence {
    pub index: usize,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractorRequest {
    pub doc_id: String,
    pub sentences: Vec<RequestSentence>,
}

impl ExtractorRequest {
    pub fn new(doc_id: &str, sentences: &[Sentence]) -> Self {
        ExtractorRequest {
            doc_id: doc_id.to_owned(),
            sentences: sentences
                .iter()
                .map(|s| RequestSentence {
                    index: s.index,
                    text: s.text.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WireCandidate {
    pub category: EntityCategory,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WireMention {
    pub sentence_index: usize,
    pub begin: usize,
    pub end: usize,
    pub candidates: Vec<WireCandidate>,
    #[serde(default)]
    pub tags: Vec<Tag>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WireRelation {
    pub sentence_index: usize,
    pub subj_span: (usize, usize),
    pub obj_span: (usize, usize),
    pub relation: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ExtractorResponse {
    pub mentions: Vec<WireMention>,
    #[serde(default)]
    pub relations: Vec<WireRelation>,
}

/// A relation reported by an external classifier, with document offsets.
#[derive(Debug, Clone, PartialEq)]
pub struct ExternalRelation {
    pub sentence_index: usize,
    pub subject: (usize, usize),
    pub object: (usize, usize),
    pub relation: Relation,
    pub score: f64,
}

/// Transport to an external extractor.
pub trait ExternalExtractor: Send + Sync {
    /// Identifier recorded as the provenance extractor.
    fn id(&self) -> &str;

    /// Sends one request and returns the raw response line.
    fn call(&self, request: &ExtractorRequest) -> Result<String, ExtractionError>;
}

/// Runs a command per request, writing the request line to its standard
/// input and reading the first line of its standard output.
#[derive(Debug, Clone)]
pub struct SubprocessExtractor {
    id: String,
    program: String,
    args: Vec<String>,
}

impl SubprocessExtractor {
    /// `command` is split on whitespace into program and arguments.
    pub fn new(command: &str) -> Result<Self, ExtractionError> {
        let mut parts = command.split_whitespace().map(str::to_owned);
        let program = parts
            .next()
            .ok_or_else(|| ExtractionError::Protocol("empty extractor command".into()))?;
        Ok(SubprocessExtractor {
            id: format!("subprocess:{program}"),
            program,
            args: parts.collect(),
        })
    }
}

impl ExternalExtractor for SubprocessExtractor {
    fn id(&self) -> &str {
        &self.id
    }

    fn call(&self, request: &ExtractorRequest) -> Result<String, ExtractionError> {
        let proto = |e: std::io::Error| ExtractionError::Protocol(format!("{}: {e}", self.program));
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(proto)?;
        let line = serde_json::to_string(request).expect("request serialises");
        {
            let mut stdin = child.stdin.take().expect("piped stdin");
            stdin.write_all(line.as_bytes()).map_err(proto)?;
            stdin.write_all(b"\n").map_err(proto)?;
        }
        let mut reader = BufReader::new(child.stdout.take().expect("piped stdout"));
        let mut response = String::new();
        reader.read_line(&mut response).map_err(proto)?;
        let _ = child.wait();
        Ok(response)
    }
}

/// POSTs the request as JSON and returns the response body.
#[derive(Debug, Clone)]
pub struct HttpExtractor {
    id: String,
    url: String,
    timeout: Duration,
}

impl HttpExtractor {
    pub fn new(url: &str, timeout: Duration) -> Self {
        HttpExtractor {
            id: format!("http:{url}"),
            url: url.to_owned(),
            timeout,
        }
    }
}

impl ExternalExtractor for HttpExtractor {
    fn id(&self) -> &str {
        &self.id
    }

    fn call(&self, request: &ExtractorRequest) -> Result<String, ExtractionError> {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(self.timeout))
            .http_status_as_error(false)
            .build()
            .into();
        let mut resp = agent
            .post(&self.url)
            .send_json(request)
            .map_err(|e| ExtractionError::Protocol(format!("{}: {e}", self.url)))?;
        let status = resp.status();
        let body = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| ExtractionError::Protocol(format!("{}: {e}", self.url)))?;
        if !status.is_success() {
            return Err(ExtractionError::Protocol(format!("{}: HTTP {status}", self.url)));
        }
        Ok(body)
    }
}

/// Validates a response and converts it to document-offset mentions and
/// relations. Any inconsistency rejects the whole message.
pub fn decode_response(
    raw: &str,
    doc_id: &str,
    sentences: &[Sentence],
) -> Result<(Vec<Mention>, Vec<ExternalRelation>), ExtractionError> {
    let bad = |reason: String| ExtractionError::Protocol(format!("malformed response for {doc_id}: {reason}"));
    let response: ExtractorResponse = serde_json::from_str(raw.trim()).map_err(|e| bad(e.to_string()))?;
    let sentence = |index: usize| {
        sentences
            .iter()
            .find(|s| s.index == index)
            .ok_or_else(|| bad(format!("unknown sentence index {index}")))
    };
    let to_doc = |s: &Sentence, (b, e): (usize, usize)| -> Result<(usize, usize), ExtractionError> {
        if b >= e || e > s.text.len() || !s.text.is_char_boundary(b) || !s.text.is_char_boundary(e) {
            return Err(bad(format!("span {b}..{e} invalid in sentence {}", s.index)));
        }
        Ok((s.begin + b, s.begin + e))
    };

    let mut mentions = Vec::new();
    for wm in &response.mentions {
        let s = sentence(wm.sentence_index)?;
        let (begin, end) = to_doc(s, (wm.begin, wm.end))?;
        if wm.candidates.is_empty() {
            return Err(bad(format!("mention {}..{} has no candidates", wm.begin, wm.end)));
        }
        if let Some(c) = wm.candidates.iter().find(|c| !(0.0..=1.0).contains(&c.score)) {
            return Err(bad(format!("candidate score {} outside [0, 1]", c.score)));
        }
        if !wm.tags.is_empty() && tags_to_spans(&wm.tags).is_empty() {
            return Err(bad("tag sequence encodes no span".into()));
        }
        let first = s.tokens.iter().position(|t| t.end > begin);
        let last = s.tokens.iter().rposition(|t| t.begin < end);
        let (Some(first), Some(last)) = (first, last) else {
            return Err(bad(format!("span {}..{} covers no token", wm.begin, wm.end)));
        };
        let mut m = Mention::over_tokens(
            doc_id,
            s,
            first,
            last + 1,
            wm.candidates
                .iter()
                .map(|c| Candidate {
                    category: c.category,
                    score: c.score,
                    iri: None,
                })
                .collect(),
        );
        // Keep the boundaries the extractor reported.
        m.begin = begin;
        m.end = end;
        m.surface = s.text[begin - s.begin..end - s.begin].to_owned();
        mentions.push(m);
    }

    let mut relations = Vec::new();
    for wr in &response.relations {
        let s = sentence(wr.sentence_index)?;
        let relation = Relation::parse(&wr.relation).ok_or_else(|| bad(format!("unknown relation {:?}", wr.relation)))?;
        if !(0.0..=1.0).contains(&wr.score) {
            return Err(bad(format!("relation score {} outside [0, 1]", wr.score)));
        }
        relations.push(ExternalRelation {
            sentence_index: s.index,
            subject: to_doc(s, wr.subj_span)?,
            object: to_doc(s, wr.obj_span)?,
            relation,
            score: wr.score,
        });
    }
    Ok((mentions, relations))
}
