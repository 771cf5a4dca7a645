//! Exact-match entity evaluation: a prediction counts only when both span
//! boundaries and the category equal a gold annotation.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::ontology::EntityCategory;

use super::recognize::Mention;
use super::ExtractionError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Annotation {
    pub doc_id: String,
    pub begin: usize,
    pub end: usize,
    pub category: EntityCategory,
}

impl Annotation {
    /// Annotation for a type-resolved mention.
    pub fn from_mention(mention: &Mention) -> Option<Self> {
        Some(Annotation {
            doc_id: mention.doc_id.clone(),
            begin: mention.begin,
            end: mention.end,
            category: mention.category()?,
        })
    }
}

/// Gold annotations plus the set of documents they cover.
#[derive(Debug, Clone, Default)]
pub struct GoldCorpus {
    pub documents: BTreeSet<String>,
    pub annotations: Vec<Annotation>,
}

impl GoldCorpus {
    /// Parses `doc_id<TAB>begin<TAB>end<TAB>category` lines. `#` lines and
    /// blank lines are skipped.
    pub fn from_tsv(text: &str) -> Result<Self, ExtractionError> {
        let mut corpus = GoldCorpus::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| ExtractionError::Gold { line: idx + 1, reason };
            let fields: Vec<&str> = line.split('\t').collect();
            let [doc, begin, end, category] = fields.as_slice() else {
                return Err(err(format!("expected 4 tab-separated fields, found {}", fields.len())));
            };
            let begin: usize = begin.parse().map_err(|_| err(format!("invalid begin {begin:?}")))?;
            let end: usize = end.parse().map_err(|_| err(format!("invalid end {end:?}")))?;
            if begin >= end {
                return Err(err(format!("empty span {begin}..{end}")));
            }
            let category = category.parse().map_err(err)?;
            corpus.documents.insert((*doc).to_owned());
            corpus.annotations.push(Annotation {
                doc_id: (*doc).to_owned(),
                begin,
                end,
                category,
            });
        }
        Ok(corpus)
    }

    /// Declares documents that have no gold annotations.
    pub fn with_documents<I: IntoIterator<Item = String>>(mut self, docs: I) -> Self {
        self.documents.extend(docs);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Score {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Set when a ratio had a zero denominator and was reported as 0.
    pub undefined: bool,
}

impl Score {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        let mut undefined = false;
        let mut ratio = |num: usize, den: usize| {
            if den == 0 {
                undefined = true;
                0.0
            } else {
                num as f64 / den as f64
            }
        };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall == 0.0 {
            undefined = true;
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Score {
            tp,
            fp,
            fn_,
            precision,
            recall,
            f1,
            undefined,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub overall: Score,
    pub per_category: BTreeMap<EntityCategory, Score>,
}

/// Scores predictions against gold per category and overall (micro
/// averaged). Predictions for documents the gold corpus does not cover are
/// an error.
pub fn evaluate_exact_match(gold: &GoldCorpus, predicted: &[Annotation]) -> Result<EvaluationReport, ExtractionError> {
    if let Some(p) = predicted.iter().find(|p| !gold.documents.contains(&p.doc_id)) {
        return Err(ExtractionError::UnknownDocument(p.doc_id.clone()));
    }
    let gold_set: BTreeSet<&Annotation> = gold.annotations.iter().collect();
    let pred_set: BTreeSet<&Annotation> = predicted.iter().collect();
    let count = |category: Option<EntityCategory>| {
        let keep = |a: &&&Annotation| category.is_none_or(|c| a.category == c);
        let tp = pred_set.iter().filter(keep).filter(|a| gold_set.contains(**a)).count();
        let fp = pred_set.iter().filter(keep).count() - tp;
        let fn_ = gold_set.iter().filter(keep).count() - tp;
        Score::from_counts(tp, fp, fn_)
    };
    let per_category = EntityCategory::ALL.into_iter().map(|c| (c, count(Some(c)))).collect();
    Ok(EvaluationReport {
        overall: count(None),
        per_category,
    })
}
