//! Entity linking with context-overlap disambiguation, and normalisation
//! to external identifiers.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::ontology::{terms, EntityCategory, Gazetteer};
use crate::rdf::{vocab, Graph, Iri, Term};

use super::recognize::Mention;
use super::segment::{tokenize, Sentence};

/// Default linking threshold.
pub const DEFAULT_THETA_LINK: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkedEntity {
    pub mention: Mention,
    /// `None` when no candidate reached the threshold.
    pub iri: Option<Iri>,
    /// External identifier such as `Entrez:7157` or `DOID:1612`.
    pub normalized_id: Option<String>,
    pub category: EntityCategory,
    pub link_score: f64,
}

/// A linked entity without an external identifier mapping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissingMapping {
    pub iri: Iri,
    pub category: EntityCategory,
}

fn word_tokens(text: &str) -> BTreeSet<String> {
    tokenize(text)
        .iter()
        .map(|t| t.text(text))
        .filter(|w| w.chars().any(char::is_alphanumeric))
        .map(str::to_lowercase)
        .collect()
}

/// Lowercased word tokens of the local names and labels of everything
/// adjacent to `iri` in the graph.
pub fn neighbor_label_tokens(graph: &Graph, iri: &Iri) -> BTreeSet<String> {
    let node = Term::Iri(iri.clone());
    let label_preds = [terms::label(), terms::alt_label()];
    let mut neighbors: BTreeSet<Iri> = BTreeSet::new();
    for t in graph.matching_unordered(Some(&node), None, None) {
        if let Some(o) = t.object().as_iri() {
            neighbors.insert(o.clone());
        }
    }
    for t in graph.matching_unordered(None, None, Some(&node)) {
        if let Some(s) = t.subject().as_iri() {
            neighbors.insert(s.clone());
        }
    }
    neighbors.remove(iri);
    let mut out = BTreeSet::new();
    for n in &neighbors {
        out.extend(word_tokens(n.local_name()));
        let nt = Term::Iri(n.clone());
        for p in &label_preds {
            for l in graph.objects(&nt, p) {
                if let Some(lit) = l.as_literal() {
                    out.extend(word_tokens(lit.lexical()));
                }
            }
        }
    }
    out
}

/// Context tokens of a mention: lowercased word tokens of its sentence,
/// excluding the mention's own tokens.
pub fn context_tokens(sentence: &Sentence, mention: &Mention) -> BTreeSet<String> {
    sentence
        .tokens
        .iter()
        .filter(|t| t.end <= mention.begin || t.begin >= mention.end)
        .map(|t| sentence.token_text(t))
        .filter(|w| w.chars().any(char::is_alphanumeric))
        .map(str::to_lowercase)
        .collect()
}

/// `(1 + |context ∩ neighbours|) / (1 + |context|)`.
pub fn context_overlap(context: &BTreeSet<String>, neighbors: &BTreeSet<String>) -> f64 {
    let shared = context.intersection(neighbors).count();
    (1 + shared) as f64 / (1 + context.len()) as f64
}

/// Links type-resolved mentions. A single candidate IRI links with its
/// prior as score; several candidates are scored `prior · overlap` and the
/// best (ties by IRI) wins. Scores below `theta` leave the entity unlinked.
pub fn link(mentions: &[Mention], sentences: &[Sentence], gazetteer: &Gazetteer, graph: &Graph, theta: f64) -> Vec<LinkedEntity> {
    mentions
        .iter()
        .filter_map(|m| {
            let category = m.category()?;
            let mut candidates: Vec<(Iri, f64)> = m
                .candidates
                .iter()
                .filter(|c| c.category == category)
                .filter_map(|c| c.iri.clone().map(|i| (i, c.score)))
                .collect();
            if candidates.is_empty() {
                // Mentions from an external recogniser carry no IRIs.
                candidates = gazetteer
                    .lookup(&m.surface)
                    .into_iter()
                    .filter(|e| e.category == category)
                    .map(|e| (e.iri.clone(), e.prior))
                    .collect();
            }
            let (iri, score) = match candidates.len() {
                0 => (None, 0.0),
                1 => {
                    let (iri, prior) = candidates.remove(0);
                    (Some(iri), prior)
                }
                _ => {
                    let sentence = sentences.iter().find(|s| s.index == m.sentence_index);
                    let context = sentence.map(|s| context_tokens(s, m)).unwrap_or_default();
                    let mut scored: Vec<(Iri, f64)> = candidates
                        .into_iter()
                        .map(|(iri, prior)| {
                            let overlap = context_overlap(&context, &neighbor_label_tokens(graph, &iri));
                            (iri, prior * overlap)
                        })
                        .collect();
                    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
                    let (iri, s) = scored.remove(0);
                    (Some(iri), s)
                }
            };
            let iri = iri.filter(|_| score >= theta);
            Some(LinkedEntity {
                mention: m.clone(),
                iri,
                normalized_id: None,
                category,
                link_score: score,
            })
        })
        .collect()
}

/// Fills `normalized_id` from the entity's `ono:externalRef` links: Entrez
/// ids for genes, DOID ids for diseases. Returns the missing mapping when
/// there is none for a Gene or Disease entity.
pub fn normalize(entity: &mut LinkedEntity, graph: &Graph) -> Option<MissingMapping> {
    let iri = entity.iri.as_ref()?;
    let (namespace, label) = match entity.category {
        EntityCategory::Gene => (vocab::ENTREZ, "Entrez"),
        EntityCategory::Disease => (vocab::DOID, "DOID"),
        _ => return None,
    };
    let id = graph
        .objects(&Term::Iri(iri.clone()), &terms::external_ref())
        .filter_map(|o| o.as_iri())
        .filter_map(|r| r.as_str().strip_prefix(namespace))
        .min()
        .map(|local| format!("{label}:{local}"));
    match id {
        Some(id) => {
            entity.normalized_id = Some(id);
            None
        }
        None => {
            entity.normalized_id = None;
            Some(MissingMapping {
                iri: iri.clone(),
                category: entity.category,
            })
        }
    }
}
