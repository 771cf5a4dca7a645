//! Triple data model, indexed graph, and N-Triples / Turtle-subset I/O.

mod graph;
mod ntriples;
mod store;
mod term;
mod turtle;
pub mod vocab;

pub use graph::{Graph, IngestStats};
pub use ntriples::{parse_ntriples, parse_ntriples_with, serialize_ntriples, ParseIssue, ParseMode, Parsed};
pub use store::{load_kg, save_kg, serialize_provenance, sidecar_path, StoreError};
pub use term::{sort_canonical, BlankLabel, Iri, Literal, Provenance, Term, Triple};
pub use turtle::parse_turtle_subset;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RdfError {
    #[error("invalid IRI {iri:?}: {reason}")]
    InvalidIri { iri: String, reason: String },
    #[error("invalid literal: {0}")]
    InvalidLiteral(String),
    #[error("invalid blank node label {0:?}")]
    InvalidBlank(String),
    #[error("literal {0} cannot be a subject")]
    LiteralSubject(String),
    #[error("confidence {0} outside [0, 1]")]
    InvalidConfidence(f64),
    #[error("prefix {prefix:?} already bound to {existing}, cannot rebind to {new}")]
    PrefixConflict { prefix: String, existing: String, new: String },
    #[error("line {line}, column {column}: {reason}")]
    Syntax { line: usize, column: usize, reason: String },
    #[error("line {line}, column {column}: undefined prefix {prefix:?}")]
    UndefinedPrefix { prefix: String, line: usize, column: usize },
    #[error("line {line}, column {column}: unsupported construct: {construct}")]
    Unsupported { construct: String, line: usize, column: usize },
}

impl RdfError {
    /// Source line of a parse error, when there is one.
    pub fn line(&self) -> Option<usize> {
        match self {
            RdfError::Syntax { line, .. }
            | RdfError::UndefinedPrefix { line, .. }
            | RdfError::Unsupported { line, .. } => Some(*line),
            _ => None,
        }
    }
}
