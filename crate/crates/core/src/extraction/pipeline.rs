//! Document-level orchestration of the extraction stages.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::clock::Clock;
use crate::ontology::Gazetteer;
use crate::rdf::Graph;

use super::emit::{emit_triples, EmitReport};
use super::link::{link, normalize, LinkedEntity, MissingMapping, DEFAULT_THETA_LINK};
use super::protocol::{decode_response, ExternalExtractor, ExtractorRequest};
use super::recognize::{recognize, resolve_types, Mention};
use super::relations::{anonymize, extract_relations, Placeholder, RelationCandidate};
use super::segment::{segment, Sentence};
use super::ExtractionError;

/// Extractor id recorded for the built-in lexicon and pattern extractor.
pub const BUILTIN_EXTRACTOR: &str = "lexicon";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Document {
    pub id: String,
    pub body: String,
}

impl Document {
    pub fn new(id: impl Into<String>, body: impl Into<String>) -> Self {
        Document {
            id: id.into(),
            body: body.into(),
        }
    }
}

/// Reads every `.txt` file of `dir`; the file stem is the document id.
/// Documents come back sorted by id.
pub fn load_corpus(dir: &Path) -> Result<Vec<Document>, ExtractionError> {
    let io = |e| ExtractionError::Io {
        path: dir.to_path_buf(),
        source: e,
    };
    let mut docs = Vec::new();
    for entry in fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.extension().is_none_or(|e| e != "txt") {
            continue;
        }
        let id = path
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| ExtractionError::Protocol(format!("non UTF-8 file name {}", path.display())))?
            .to_owned();
        let body = fs::read_to_string(&path).map_err(|e| ExtractionError::Io {
            path: path.clone(),
            source: e,
        })?;
        docs.push(Document { id, body });
    }
    docs.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(docs)
}

/// Everything the pipeline derived from one document.
#[derive(Debug, Clone, Serialize)]
pub struct DocumentOutcome {
    pub doc_id: String,
    pub extractor: String,
    pub sentences: Vec<Sentence>,
    pub mentions: Vec<Mention>,
    pub entities: Vec<LinkedEntity>,
    pub candidates: Vec<RelationCandidate>,
    pub missing_mappings: Vec<MissingMapping>,
    /// Non-fatal problems, e.g. an external response that was rejected.
    pub warnings: Vec<String>,
}

impl DocumentOutcome {
    /// Mentions that could not be linked, for review.
    pub fn unlinked(&self) -> impl Iterator<Item = &LinkedEntity> {
        self.entities.iter().filter(|e| e.iri.is_none())
    }
}

/// Read-only extraction over a fixed graph and gazetteer.
pub struct Pipeline<'a> {
    graph: &'a Graph,
    gazetteer: &'a Gazetteer,
    theta_link: f64,
    external: Option<Box<dyn ExternalExtractor + 'a>>,
}

impl<'a> Pipeline<'a> {
    pub fn new(graph: &'a Graph, gazetteer: &'a Gazetteer) -> Self {
        Pipeline {
            graph,
            gazetteer,
            theta_link: DEFAULT_THETA_LINK,
            external: None,
        }
    }

    pub fn with_theta_link(mut self, theta: f64) -> Self {
        self.theta_link = theta;
        self
    }

    pub fn with_external(mut self, extractor: Box<dyn ExternalExtractor + 'a>) -> Self {
        self.external = Some(extractor);
        self
    }

    /// Runs all stages on one document. An external extractor whose
    /// response is rejected is replaced by the built-in one for that
    /// document, with a warning.
    pub fn process(&self, doc: &Document) -> Result<DocumentOutcome, ExtractionError> {
        let sentences = segment(&doc.body);
        let mut warnings = Vec::new();
        let mut external_relations = None;
        let mut extractor = BUILTIN_EXTRACTOR.to_owned();
        let raw_mentions = match &self.external {
            Some(ext) => {
                let decoded = ext
                    .call(&ExtractorRequest::new(&doc.id, &sentences))
                    .and_then(|raw| decode_response(&raw, &doc.id, &sentences));
                match decoded {
                    Ok((m, r)) => {
                        extractor = ext.id().to_owned();
                        external_relations = Some(r);
                        m
                    }
                    Err(e) => {
                        warnings.push(format!("{e}; using the built-in extractor"));
                        recognize(&doc.id, &sentences, self.gazetteer)
                    }
                }
            }
            None => recognize(&doc.id, &sentences, self.gazetteer),
        };
        let mentions = raw_mentions.iter().map(resolve_types).collect::<Result<Vec<_>, _>>()?;
        let mut entities = link(&mentions, &sentences, self.gazetteer, self.graph, self.theta_link);
        let mut missing_mappings = Vec::new();
        for e in &mut entities {
            missing_mappings.extend(normalize(e, self.graph));
        }

        let mut candidates = Vec::new();
        match external_relations {
            None => {
                for s in &sentences {
                    candidates.extend(extract_relations(&doc.id, s, &entities, self.graph)?);
                }
            }
            Some(relations) => {
                for r in relations {
                    let find = |(b, e): (usize, usize)| {
                        entities
                            .iter()
                            .find(|x| x.mention.begin == b && x.mention.end == e && x.iri.is_some())
                    };
                    let (Some(subject), Some(object)) = (find(r.subject), find(r.object)) else {
                        warnings.push(format!(
                            "relation {} in sentence {} refers to an unlinked span",
                            r.relation, r.sentence_index
                        ));
                        continue;
                    };
                    let sentence = &sentences[r.sentence_index];
                    let spans = [
                        (r.subject, Placeholder::for_entity(subject, self.graph)),
                        (r.object, Placeholder::for_entity(object, self.graph)),
                    ];
                    candidates.push(RelationCandidate {
                        doc_id: doc.id.clone(),
                        sentence_index: r.sentence_index,
                        subject: subject.clone(),
                        object: object.clone(),
                        relation: r.relation,
                        score: r.score,
                        anonymized_sentence: anonymize(sentence, &spans)?,
                    });
                }
            }
        }
        Ok(DocumentOutcome {
            doc_id: doc.id.clone(),
            extractor,
            sentences,
            mentions,
            entities,
            candidates,
            missing_mappings,
            warnings,
        })
    }

    /// Processes documents in parallel; outcomes come back in document id
    /// order whatever the input order.
    pub fn process_all(&self, docs: &[Document]) -> Result<Vec<DocumentOutcome>, ExtractionError> {
        let mut seen = BTreeSet::new();
        if let Some(dup) = docs.iter().find(|d| !seen.insert(d.id.as_str())) {
            return Err(ExtractionError::DuplicateDocument(dup.id.clone()));
        }
        let mut outcomes = docs
            .par_iter()
            .map(|d| self.process(d))
            .collect::<Result<Vec<_>, _>>()?;
        outcomes.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
        Ok(outcomes)
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CorpusReport {
    pub documents: usize,
    pub mentions: usize,
    pub unlinked: usize,
    pub candidates: usize,
    pub missing_mappings: usize,
    pub emitted: EmitReport,
    pub warnings: Vec<String>,
}

/// Emits the candidates of all outcomes into `graph`, in document order.
pub fn emit_outcomes(outcomes: &[DocumentOutcome], graph: &mut Graph, clock: &Clock) -> CorpusReport {
    let mut report = CorpusReport {
        documents: outcomes.len(),
        ..Default::default()
    };
    for o in outcomes {
        report.mentions += o.mentions.len();
        report.unlinked += o.unlinked().count();
        report.candidates += o.candidates.len();
        report.missing_mappings += o.missing_mappings.len();
        report
            .warnings
            .extend(o.warnings.iter().map(|w| format!("{}: {w}", o.doc_id)));
        let r = emit_triples(&o.candidates, graph, &o.extractor, clock);
        report.emitted.inserted.extend(r.inserted);
        report.emitted.duplicates += r.duplicates;
        report.emitted.skipped += r.skipped;
    }
    crate::rdf::sort_canonical(&mut report.emitted.inserted);
    report
}

/// Runs the full pipeline over `docs` and inserts the results into
/// `graph`.
pub fn extract_corpus(
    docs: &[Document],
    graph: &mut Graph,
    gazetteer: &Gazetteer,
    theta_link: f64,
    clock: &Clock,
) -> Result<CorpusReport, ExtractionError> {
    let outcomes = {
        let snapshot: &Graph = graph;
        Pipeline::new(snapshot, gazetteer)
            .with_theta_link(theta_link)
            .process_all(docs)?
    };
    Ok(emit_outcomes(&outcomes, graph, clock))
}
