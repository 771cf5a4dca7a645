//! Entity anonymisation and pattern-based relation extraction.

use std::fmt;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::ontology::{terms, EntityCategory};
use crate::rdf::{Graph, Iri, Term};

use super::link::LinkedEntity;
use super::segment::Sentence;
use super::ExtractionError;

/// Placeholder tokens substituted for entity spans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Placeholder {
    Gene,
    Disease,
    Type,
    Evidence,
    Class,
}

impl Placeholder {
    pub fn as_str(self) -> &'static str {
        match self {
            Placeholder::Gene => "@GENE$",
            Placeholder::Disease => "@DISEASE$",
            Placeholder::Type => "@TYPE$",
            Placeholder::Evidence => "@EVIDENCE$",
            Placeholder::Class => "@CLASS$",
        }
    }

    /// Placeholder for a linked entity. Disease-category entities that are
    /// classes in the graph (e.g. `ono:Disease`) become `@CLASS$`.
    pub fn for_entity(entity: &LinkedEntity, graph: &Graph) -> Placeholder {
        match entity.category {
            EntityCategory::Gene => Placeholder::Gene,
            EntityCategory::BiomarkerType => Placeholder::Type,
            EntityCategory::EvidenceSource => Placeholder::Evidence,
            EntityCategory::Disease => match &entity.iri {
                Some(iri) if is_class(graph, iri) => Placeholder::Class,
                _ => Placeholder::Disease,
            },
        }
    }
}

fn is_class(graph: &Graph, iri: &Iri) -> bool {
    graph.has(&Term::Iri(iri.clone()), &terms::rdf_type(), &Term::Iri(terms::owl_class()))
}

/// Replaces each document-offset span with its placeholder. All other bytes
/// of the sentence are copied unchanged.
pub fn anonymize(sentence: &Sentence, spans: &[((usize, usize), Placeholder)]) -> Result<String, ExtractionError> {
    let mut sorted: Vec<&((usize, usize), Placeholder)> = spans.iter().collect();
    sorted.sort_by_key(|((b, _), _)| *b);
    for ((b, e), _) in &sorted {
        if b >= e || *b < sentence.begin || *e > sentence.end {
            return Err(ExtractionError::SpanOutsideSentence { begin: *b, end: *e });
        }
    }
    for pair in sorted.windows(2) {
        let ((b1, e1), _) = pair[0];
        let ((b2, e2), _) = pair[1];
        if b2 < e1 {
            return Err(ExtractionError::OverlappingSpans {
                first: (*b1, *e1),
                second: (*b2, *e2),
            });
        }
    }
    let mut out = String::with_capacity(sentence.text.len());
    let mut cursor = sentence.begin;
    for ((b, e), ph) in sorted {
        out.push_str(&sentence.text[cursor - sentence.begin..b - sentence.begin]);
        out.push_str(ph.as_str());
        cursor = *e;
    }
    out.push_str(&sentence.text[cursor - sentence.begin..]);
    Ok(out)
}

/// The closed relation vocabulary of the extractor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "causes")]
    Causes,
    #[serde(rename = "hasType")]
    HasType,
    #[serde(rename = "hasEvidence")]
    HasEvidence,
    #[serde(rename = "isA")]
    IsA,
}

impl Relation {
    pub const ALL: [Relation; 4] = [Relation::Causes, Relation::HasType, Relation::HasEvidence, Relation::IsA];

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Causes => "causes",
            Relation::HasType => "hasType",
            Relation::HasEvidence => "hasEvidence",
            Relation::IsA => "isA",
        }
    }

    pub fn predicate(self) -> Iri {
        Iri::ono(self.as_str())
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.as_str() == name)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationCandidate {
    pub doc_id: String,
    pub sentence_index: usize,
    pub subject: LinkedEntity,
    pub object: LinkedEntity,
    pub relation: Relation,
    pub score: f64,
    pub anonymized_sentence: String,
}

static CAUSES: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"@GENE\$.*?\b(?:responsible for|causes|cause)\b.*?@DISEASE\$").unwrap());
static HAS_TYPE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"@GENE\$ (?:has (?:an? )?(?:\S+ ){0,2}?@TYPE\$ functionality|is (?:an? )?(?:\S+ ){0,2}?@TYPE\$)").unwrap()
});
static EVIDENCE_TRIGGER: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\b(?:mentioned in|indexed in|evidence)\b").unwrap());
static IS_A: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"@CLASS\$,? called (?:an? )?@DISEASE\$|@DISEASE\$ is (?:an? )?(?:\S+ ){0,2}?@CLASS\$").unwrap()
});

fn span(e: &LinkedEntity) -> (usize, usize) {
    (e.mention.begin, e.mention.end)
}

/// Runs the built-in patterns over every ordered pair of linked entities in
/// the sentence:
///
/// * `causes`: gene ... "responsible for" / "causes" ... disease
/// * `hasType`: gene "has ... TYPE functionality" or gene "is a ... TYPE"
/// * `hasEvidence`: a non-source entity followed by an evidence source
///   with "mentioned in", "indexed in" or "evidence" between them and no
///   other entity in between
/// * `isA`: disease class "called" disease, or disease "is a" class
///
/// Unlinked entities never take part. Scores are the smaller link score.
pub fn extract_relations(
    doc_id: &str,
    sentence: &Sentence,
    entities: &[LinkedEntity],
    graph: &Graph,
) -> Result<Vec<RelationCandidate>, ExtractionError> {
    let linked: Vec<&LinkedEntity> = entities
        .iter()
        .filter(|e| e.iri.is_some() && e.mention.sentence_index == sentence.index)
        .collect();
    let mut out = Vec::new();
    for s in &linked {
        for o in &linked {
            if std::ptr::eq(*s, *o) || s.iri == o.iri {
                continue;
            }
            let ps = Placeholder::for_entity(s, graph);
            let po = Placeholder::for_entity(o, graph);
            let relation = match (ps, po) {
                (Placeholder::Gene, Placeholder::Disease) => Relation::Causes,
                (Placeholder::Gene, Placeholder::Type) => Relation::HasType,
                (Placeholder::Disease, Placeholder::Class) => Relation::IsA,
                (p, Placeholder::Evidence) if p != Placeholder::Evidence => Relation::HasEvidence,
                _ => continue,
            };
            let anonymized = anonymize(sentence, &[(span(s), ps), (span(o), po)])?;
            let fires = match relation {
                Relation::Causes => CAUSES.is_match(&anonymized),
                Relation::HasType => HAS_TYPE.is_match(&anonymized),
                Relation::IsA => IS_A.is_match(&anonymized),
                Relation::HasEvidence => {
                    let (_, se) = span(s);
                    let (ob, _) = span(o);
                    let between_clear = se <= ob
                        && !entities.iter().any(|e| {
                            e.mention.sentence_index == sentence.index && e.mention.begin >= se && e.mention.end <= ob
                        });
                    between_clear && EVIDENCE_TRIGGER.is_match(&sentence.text[se - sentence.begin..ob - sentence.begin])
                }
            };
            if fires {
                out.push(RelationCandidate {
                    doc_id: doc_id.to_owned(),
                    sentence_index: sentence.index,
                    subject: (*s).clone(),
                    object: (*o).clone(),
                    relation,
                    score: s.link_score.min(o.link_score),
                    anonymized_sentence: anonymized,
                });
            }
        }
    }
    Ok(out)
}
