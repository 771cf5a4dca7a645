//! Gazetteer-driven mention recognition and multi-type resolution.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ontology::{EntityCategory, Gazetteer};
use crate::rdf::Iri;

use super::segment::Sentence;
use super::ExtractionError;

/// Token tags: B/I/O spans plus the model-specific X, CLS, SEP and PAD.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    B,
    I,
    O,
    X,
    #[serde(rename = "CLS")]
    Cls,
    #[serde(rename = "SEP")]
    Sep,
    #[serde(rename = "PAD")]
    Pad,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::B => "B",
            Tag::I => "I",
            Tag::O => "O",
            Tag::X => "X",
            Tag::Cls => "CLS",
            Tag::Sep => "SEP",
            Tag::Pad => "PAD",
        })
    }
}

/// Token-index spans `[start, end)` encoded by a tag sequence. `X` continues
/// whatever the previous kept tag was; `CLS`, `SEP` and `PAD` are dropped
/// before spans are built, so indices refer to the remaining tags.
pub fn tags_to_spans(tags: &[Tag]) -> Vec<(usize, usize)> {
    let mut effective: Vec<Tag> = Vec::with_capacity(tags.len());
    for &t in tags {
        match t {
            Tag::Cls | Tag::Sep | Tag::Pad => {}
            Tag::X => {
                let prev = effective.last().copied().unwrap_or(Tag::O);
                effective.push(if prev == Tag::O { Tag::O } else { Tag::I });
            }
            other => effective.push(other),
        }
    }
    let mut spans = Vec::new();
    let mut open: Option<usize> = None;
    for (i, t) in effective.iter().enumerate() {
        match t {
            Tag::B => {
                if let Some(s) = open.take() {
                    spans.push((s, i));
                }
                open = Some(i);
            }
            Tag::I => {
                if open.is_none() {
                    open = Some(i);
                }
            }
            _ => {
                if let Some(s) = open.take() {
                    spans.push((s, i));
                }
            }
        }
    }
    if let Some(s) = open {
        spans.push((s, effective.len()));
    }
    spans
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub category: EntityCategory,
    pub score: f64,
    /// Entity the candidate came from, when known.
    pub iri: Option<Iri>,
}

/// A recognised entity mention. `begin`/`end` are byte offsets into the
/// document body; `tags` has one entry per sentence token.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mention {
    pub doc_id: String,
    pub sentence_index: usize,
    pub begin: usize,
    pub end: usize,
    pub surface: String,
    pub tags: Vec<Tag>,
    pub candidates: Vec<Candidate>,
}

impl Mention {
    /// Builds a mention over sentence tokens `[first, last)`.
    pub fn over_tokens(doc_id: &str, sentence: &Sentence, first: usize, last: usize, candidates: Vec<Candidate>) -> Self {
        let begin = sentence.tokens[first].begin;
        let end = sentence.tokens[last - 1].end;
        let tags = (0..sentence.tokens.len())
            .map(|i| match i {
                i if i == first => Tag::B,
                i if i > first && i < last => Tag::I,
                _ => Tag::O,
            })
            .collect();
        Mention {
            doc_id: doc_id.to_owned(),
            sentence_index: sentence.index,
            begin,
            end,
            surface: sentence.text[begin - sentence.begin..end - sentence.begin].to_owned(),
            tags,
            candidates,
        }
    }

    /// Category of the best candidate (the resolved category after
    /// [`resolve_types`]).
    pub fn category(&self) -> Option<EntityCategory> {
        self.candidates.first().map(|c| c.category)
    }
}

/// Longest-match, left-to-right dictionary recognition. Symbols match with
/// their exact case, labels case-insensitively; candidates carry the
/// gazetteer priors.
pub fn recognize(doc_id: &str, sentences: &[Sentence], gazetteer: &Gazetteer) -> Vec<Mention> {
    let mut mentions = Vec::new();
    let max = gazetteer.max_tokens().max(1);
    for sentence in sentences {
        let words: Vec<&str> = sentence.tokens.iter().map(|t| sentence.token_text(t)).collect();
        let lower: Vec<String> = words.iter().map(|w| w.to_lowercase()).collect();
        let mut i = 0;
        while i < words.len() {
            let mut matched = None;
            for len in (1..=max.min(words.len() - i)).rev() {
                let key = lower[i..i + len].join(" ");
                let exact = words[i..i + len].join(" ");
                let hits = gazetteer.lookup_key(&key, &exact);
                if !hits.is_empty() {
                    let candidates = hits
                        .into_iter()
                        .map(|e| Candidate {
                            category: e.category,
                            score: e.prior,
                            iri: Some(e.iri.clone()),
                        })
                        .collect();
                    matched = Some((len, candidates));
                    break;
                }
            }
            match matched {
                Some((len, candidates)) => {
                    mentions.push(Mention::over_tokens(doc_id, sentence, i, i + len, candidates));
                    i += len;
                }
                None => i += 1,
            }
        }
    }
    mentions
}

/// Picks one category: highest score, ties broken by category priority
/// (Gene, Disease, BiomarkerType, EvidenceSource) and then by IRI. The
/// returned mention keeps only candidates of the chosen category, best
/// first.
pub fn resolve_types(mention: &Mention) -> Result<Mention, ExtractionError> {
    if mention.candidates.is_empty() {
        return Err(ExtractionError::NoCandidates {
            surface: mention.surface.clone(),
        });
    }
    let mut ranked = mention.candidates.clone();
    ranked.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then(a.category.cmp(&b.category))
            .then_with(|| iri_order(&a.iri, &b.iri))
    });
    let chosen = ranked[0].category;
    ranked.retain(|c| c.category == chosen);
    Ok(Mention {
        candidates: ranked,
        ..mention.clone()
    })
}

fn iri_order(a: &Option<Iri>, b: &Option<Iri>) -> std::cmp::Ordering {
    match (a, b) {
        (Some(x), Some(y)) => x.cmp(y),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extraction::segment::segment;
    use crate::ontology::gazetteer;
    use crate::rdf::parse_turtle_subset;

    fn gz() -> Gazetteer {
        let g = parse_turtle_subset(
            r#"@prefix ono: <http://onconet.example/ono#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix skos: <http://www.w3.org/2004/02/skos/core#> .
ono:Cancer rdfs:subClassOf ono:Disease ; rdfs:label "cancer" .
ono:POTSF rdfs:subClassOf ono:BiomarkerType .
ono:TP53 a ono:Biomarker .
ono:FAS a ono:Biomarker .
ono:BRCA a ono:Cancer ; skos:altLabel "breast cancer" .
ono:Breast a ono:Biomarker ; rdfs:label "breast" .
"#,
        )
        .unwrap();
        gazetteer(&g)
    }

    fn surfaces(ms: &[Mention]) -> Vec<&str> {
        ms.iter().map(|m| m.surface.as_str()).collect()
    }

    #[test]
    fn named_entities_in_sentence() {
        let text = "TP53 and FAS are the top two POTSF genes in terms of the number of associated cancer types.";
        let ms = recognize("d", &segment(text), &gz());
        assert_eq!(surfaces(&ms), vec!["TP53", "FAS", "POTSF", "cancer"]);
        let m = &ms[0];
        assert_eq!(m.tags.len(), segment(text)[0].tokens.len());
        assert_eq!(m.tags[0], Tag::B);
        assert!(m.tags[1..].iter().all(|t| *t == Tag::O));
    }

    #[test]
    fn no_hits() {
        assert!(recognize("d", &segment("Nothing to see here."), &gz()).is_empty());
    }

    #[test]
    fn longest_match_wins() {
        let text = "Seen in breast cancer patients.";
        let ms = recognize("d", &segment(text), &gz());
        assert_eq!(surfaces(&ms), vec!["breast cancer"]);
        assert_eq!(&text[ms[0].begin..ms[0].end], "breast cancer");
        assert_eq!(ms[0].tags.iter().filter(|t| **t == Tag::I).count(), 1);
    }

    #[test]
    fn gene_symbols_are_case_sensitive() {
        assert!(recognize("d", &segment("tp53 is lowercase here."), &gz()).is_empty());
    }

    fn cand(category: EntityCategory, score: f64) -> Candidate {
        Candidate {
            category,
            score,
            iri: None,
        }
    }

    fn with(cands: Vec<Candidate>) -> Mention {
        Mention {
            doc_id: "d".into(),
            sentence_index: 0,
            begin: 0,
            end: 1,
            surface: "x".into(),
            tags: vec![Tag::B],
            candidates: cands,
        }
    }

    #[test]
    fn argmax_and_priority() {
        use EntityCategory::*;
        let m = resolve_types(&with(vec![cand(Disease, 0.2), cand(Gene, 0.8)])).unwrap();
        assert_eq!(m.category(), Some(Gene));
        let m = resolve_types(&with(vec![cand(Disease, 0.5), cand(Gene, 0.5)])).unwrap();
        assert_eq!(m.category(), Some(Gene));
        assert!(matches!(resolve_types(&with(vec![])), Err(ExtractionError::NoCandidates { .. })));
    }

    #[test]
    fn x_extends_and_special_tags_are_dropped() {
        use Tag::*;
        assert_eq!(tags_to_spans(&[Cls, B, X, O, B, I, Sep, Pad]), vec![(0, 2), (3, 5)]);
        assert_eq!(tags_to_spans(&[O, X, B]), vec![(2, 3)]);
        assert_eq!(tags_to_spans(&[I, I, O]), vec![(0, 2)]);
    }
}
