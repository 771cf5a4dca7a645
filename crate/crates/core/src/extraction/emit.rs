//! Turning relation candidates into provenance-tagged graph triples.

use serde::Serialize;

use crate::clock::Clock;
use crate::rdf::{Graph, Provenance, Term, Triple};

use super::relations::RelationCandidate;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EmitReport {
    /// Triples that were new to the graph, in canonical order.
    pub inserted: Vec<Triple>,
    /// Candidates whose triple was already present.
    pub duplicates: usize,
    /// Candidates missing a linked subject or object.
    pub skipped: usize,
}

/// Inserts one triple per candidate with provenance naming the document,
/// the extractor and the candidate score.
pub fn emit_triples(candidates: &[RelationCandidate], graph: &mut Graph, extractor: &str, clock: &Clock) -> EmitReport {
    let mut report = EmitReport::default();
    for c in candidates {
        let (Some(s), Some(o)) = (&c.subject.iri, &c.object.iri) else {
            report.skipped += 1;
            continue;
        };
        let triple = Triple::new(Term::Iri(s.clone()), c.relation.predicate(), Term::Iri(o.clone()))
            .expect("IRI subject");
        let provenance = Provenance::new(c.doc_id.clone(), extractor, c.score.clamp(0.0, 1.0), clock.now())
            .expect("clamped confidence");
        if graph.insert(triple.clone(), Some(provenance)) {
            report.inserted.push(triple);
        } else {
            report.duplicates += 1;
        }
    }
    crate::rdf::sort_canonical(&mut report.inserted);
    report
}
