//! The ONO schema and its instances: cancer codes, biomarker gene records,
//! Feature reification, seed loading and the extraction gazetteer.

mod axioms;
mod expand;
mod gazetteer;
mod model;
mod seed;
pub mod terms;

use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

use crate::rdf::{Iri, RdfError};

pub use axioms::{instance_axioms, InstanceMinter};
pub use expand::expand_record;
pub use gazetteer::{gazetteer, EntityCategory, Gazetteer, GazetteerEntry};
pub use model::{
    feature_iri, CancerCode, CancerType, EvidenceSource, Feature, GeneRecord, GeneType, Significance, EXTENSION_CODES,
    TCGA_CODES,
};
pub use seed::{cancer_counts, cancer_types, features, gene_records, load_seed, load_seed_with, seed_graph, subclasses_of};

/// One invariant violation found in a seed record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordError {
    pub subject: Option<Iri>,
    pub reason: String,
}

impl RecordError {
    pub fn new(subject: Option<Iri>, reason: impl Into<String>) -> Self {
        RecordError {
            subject,
            reason: reason.into(),
        }
    }
}

impl fmt::Display for RecordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.subject {
            Some(s) => write!(f, "{s}: {}", self.reason),
            None => f.write_str(&self.reason),
        }
    }
}

fn summarize(errors: &[RecordError]) -> String {
    let shown: Vec<String> = errors.iter().take(5).map(ToString::to_string).collect();
    let more = errors.len().saturating_sub(shown.len());
    if more > 0 {
        format!("{} (and {more} more)", shown.join("; "))
    } else {
        shown.join("; ")
    }
}

#[derive(Debug, Error)]
pub enum OntologyError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: RdfError,
    },
    #[error("no .ttl or .nt seed files under {0}")]
    NoSeedFiles(PathBuf),
    #[error("seed validation failed: {}", summarize(.0))]
    Validation(Vec<RecordError>),
    #[error("alias file line {line}: {reason}")]
    Alias { line: usize, reason: String },
}
