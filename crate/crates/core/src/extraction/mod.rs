//! Text to triples: segmentation, recognition, linking, relation extraction
//! and exact-match evaluation.

use std::path::PathBuf;

use thiserror::Error;

pub mod emit;
pub mod evaluate;
pub mod link;
pub mod pipeline;
pub mod protocol;
pub mod recognize;
pub mod relations;
pub mod segment;

pub use emit::{emit_triples, EmitReport};
pub use evaluate::{evaluate_exact_match, Annotation, EvaluationReport, GoldCorpus, Score};
pub use link::{link, normalize, LinkedEntity, MissingMapping, DEFAULT_THETA_LINK};
pub use pipeline::{
    emit_outcomes, extract_corpus, load_corpus, CorpusReport, Document, DocumentOutcome, Pipeline, BUILTIN_EXTRACTOR,
};
pub use protocol::{
    decode_response, ExternalExtractor, ExtractorRequest, ExtractorResponse, HttpExtractor, SubprocessExtractor,
};
pub use recognize::{recognize, resolve_types, Candidate, Mention, Tag};
pub use relations::{anonymize, extract_relations, Placeholder, Relation, RelationCandidate};
pub use segment::{segment, tokenize, Sentence, Token};

#[derive(Debug, Error)]
pub enum ExtractionError {
    #[error("mention {surface:?} has no type candidates")]
    NoCandidates { surface: String },
    #[error("entity spans {first:?} and {second:?} overlap")]
    OverlappingSpans { first: (usize, usize), second: (usize, usize) },
    #[error("span {begin}..{end} lies outside its sentence")]
    SpanOutsideSentence { begin: usize, end: usize },
    #[error("gold annotations line {line}: {reason}")]
    Gold { line: usize, reason: String },
    #[error("prediction for document {0:?} which has no gold annotations")]
    UnknownDocument(String),
    #[error("document id {0:?} appears twice")]
    DuplicateDocument(String),
    #[error("external extractor: {0}")]
    Protocol(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
