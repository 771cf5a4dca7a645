//! Six-dimension quality assessment of the KG.
//!
//! Every score lies in `[0, 1]`. The formulas are this crate's own
//! desk-scale definitions:
//!
//! * availability: well-formed IRIs under a registered namespace / distinct IRIs
//! * completeness: Biomarker instances with every required property / Biomarker instances
//! * conciseness: `1 - duplicates / parsed statements`, counted during ingestion
//! * interlinking: instances with an object in an external namespace / instances
//! * performance: `min(1, budget / p95)` over a fixed benchmark query set
//! * relevancy: triples whose provenance source is trusted / triples with provenance

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::clock::Clock;
use crate::dlq;
use crate::ontology::terms;
use crate::rdf::{vocab, Graph, Iri, Term};
use crate::reasoner::{builtin_rules, saturate};

/// Header line carried by every report.
pub const FORMULA_NOTE: &str = "scores use this toolkit's own formulas for the six dimensions";

/// Benchmark queries timed by the performance dimension.
pub const BENCHMARK_QUERIES: [&str; 5] = [
    "Biomarker and causes some BRCA and isA only POTSF",
    "Biomarker",
    "Cancer",
    "POTSF",
    "EvidenceSource",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dimension {
    Availability,
    Completeness,
    Conciseness,
    Interlinking,
    Performance,
    Relevancy,
}

impl Dimension {
    pub const ALL: [Dimension; 6] = [
        Dimension::Availability,
        Dimension::Completeness,
        Dimension::Conciseness,
        Dimension::Interlinking,
        Dimension::Performance,
        Dimension::Relevancy,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Dimension::Availability => "availability",
            Dimension::Completeness => "completeness",
            Dimension::Conciseness => "conciseness",
            Dimension::Interlinking => "interlinking",
            Dimension::Performance => "performance",
            Dimension::Relevancy => "relevancy",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A property every Biomarker instance must have to count as complete.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Requirement {
    /// A biomarker type through `geneType` or `hasType`.
    Type,
    /// At least one `crossResponsibility`.
    Responsibility,
    /// A feature with a significance level for every responsibility.
    Significance,
    /// At least one `evidenceType` or `hasEvidence`.
    Evidence,
    /// An integer `hasCitations` of at least 1.
    Citations,
}

impl Requirement {
    pub const ALL: [Requirement; 5] = [
        Requirement::Type,
        Requirement::Responsibility,
        Requirement::Significance,
        Requirement::Evidence,
        Requirement::Citations,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Requirement::Type => "type",
            Requirement::Responsibility => "responsibility",
            Requirement::Significance => "significance",
            Requirement::Evidence => "evidence",
            Requirement::Citations => "citations",
        }
    }
}

impl FromStr for Requirement {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|r| r.as_str() == s.trim())
            .ok_or_else(|| format!("unknown required property {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityConfig {
    #[serde(with = "millis")]
    pub latency_budget: Duration,
    pub trusted_sources: Vec<String>,
    pub required: Vec<Requirement>,
    /// Assess the RDFS closure instead of the asserted graph.
    pub saturate: bool,
    /// Passes over the benchmark set; each pass times every query once.
    pub benchmark_rounds: usize,
}

impl Default for QualityConfig {
    fn default() -> Self {
        QualityConfig {
            latency_budget: Duration::from_millis(50),
            trusted_sources: ["PubMed", "MeSH", "CancerIndex", "seed"].map(String::from).to_vec(),
            required: Requirement::ALL.to_vec(),
            saturate: false,
            benchmark_rounds: 20,
        }
    }
}

impl QualityConfig {
    /// A source is trusted when it equals a listed name or starts with
    /// `<name>:` (e.g. `PubMed:12345`).
    pub fn is_trusted(&self, source: &str) -> bool {
        self.trusted_sources.iter().any(|t| {
            source == t
                || source
                    .strip_prefix(t.as_str())
                    .is_some_and(|rest| rest.starts_with(':'))
        })
    }
}

mod millis {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64() * 1000.0)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let ms = f64::deserialize(d)?;
        Ok(Duration::from_secs_f64(ms.max(0.0) / 1000.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QualityReport {
    pub note: String,
    pub scores: BTreeMap<Dimension, f64>,
    /// Offending items and diagnostics per dimension.
    pub details: BTreeMap<Dimension, Vec<String>>,
    pub generated_at: DateTime<Utc>,
}

impl QualityReport {
    pub fn score(&self, dimension: Dimension) -> f64 {
        self.scores[&dimension]
    }

    /// Two-column table followed by the details of each dimension.
    pub fn render_table(&self) -> String {
        let mut out = format!("# {FORMULA_NOTE}\n{:<14} score\n", "dimension");
        for (d, s) in &self.scores {
            out.push_str(&format!("{:<14} {s:.4}\n", d.as_str()));
        }
        for (d, items) in &self.details {
            if items.is_empty() {
                continue;
            }
            out.push_str(&format!("\n[{d}]\n"));
            for i in items {
                out.push_str(&format!("  {i}\n"));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

fn ratio(hits: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        hits as f64 / total as f64
    }
}

fn all_iris(graph: &Graph) -> BTreeSet<Iri> {
    let mut out = BTreeSet::new();
    for t in graph.iter() {
        out.insert(t.predicate().clone());
        for term in [t.subject(), t.object()] {
            if let Some(i) = term.as_iri() {
                out.insert(i.clone());
            }
        }
    }
    out
}

fn well_formed(iri: &Iri) -> bool {
    let s = iri.as_str();
    match s.split_once(':') {
        Some((scheme, rest)) => {
            !rest.is_empty()
                && scheme.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && scheme.chars().all(|c| c.is_ascii_alphanumeric() || "+-.".contains(c))
        }
        None => false,
    }
}

fn availability(graph: &Graph) -> (f64, Vec<String>) {
    let namespaces: Vec<&String> = graph.prefixes().values().collect();
    let iris = all_iris(graph);
    let mut bad = Vec::new();
    for i in &iris {
        if !well_formed(i) {
            bad.push(format!("malformed IRI {i}"));
        } else if !namespaces.iter().any(|ns| i.as_str().starts_with(ns.as_str())) {
            bad.push(format!("unregistered namespace {i}"));
        }
    }
    (ratio(iris.len() - bad.len(), iris.len()), bad)
}

fn missing_requirements(graph: &Graph, gene: &Term, required: &[Requirement]) -> Vec<Requirement> {
    let has_any = |preds: &[Iri]| preds.iter().any(|p| graph.objects(gene, p).next().is_some());
    let responsibilities: Vec<&Term> = graph.objects(gene, &terms::cross_responsibility()).collect();
    required
        .iter()
        .copied()
        .filter(|r| {
            !match r {
                Requirement::Type => has_any(&[terms::gene_type(), terms::has_type()]),
                Requirement::Responsibility => !responsibilities.is_empty(),
                Requirement::Evidence => has_any(&[terms::evidence_type(), terms::has_evidence()]),
                Requirement::Citations => graph
                    .objects(gene, &terms::has_citations())
                    .filter_map(|o| o.as_literal()?.as_integer())
                    .any(|n| n >= 1),
                Requirement::Significance => responsibilities.iter().all(|cancer| {
                    graph.subjects(&terms::feature_of(), gene).any(|f| {
                        graph.has(f, &terms::in_cancer(), cancer)
                            && graph.objects(f, &terms::has_significance()).next().is_some()
                    })
                }),
            }
        })
        .collect()
}

fn completeness(graph: &Graph, config: &QualityConfig) -> (f64, Vec<String>) {
    let genes = graph.instances_of(&terms::biomarker());
    let mut details = Vec::new();
    let mut complete = 0;
    for g in &genes {
        let missing = missing_requirements(graph, g, &config.required);
        if missing.is_empty() {
            complete += 1;
        } else {
            let names: Vec<&str> = missing.iter().map(|r| r.as_str()).collect();
            details.push(format!("{} lacks {}", term_name(graph, g), names.join(", ")));
        }
    }
    if genes.is_empty() {
        details.push("no Biomarker instances".into());
    }
    (ratio(complete, genes.len()), details)
}

fn conciseness(graph: &Graph) -> (f64, Vec<String>) {
    let stats = graph.ingest_stats();
    if stats.statements == 0 {
        return (1.0, Vec::new());
    }
    let score = 1.0 - stats.duplicates as f64 / stats.statements as f64;
    let details = if stats.duplicates > 0 {
        vec![format!("{} of {} parsed statements were duplicates", stats.duplicates, stats.statements)]
    } else {
        Vec::new()
    };
    (score, details)
}

const INTERNAL_NAMESPACES: [&str; 6] = [vocab::ONO, vocab::RDF, vocab::RDFS, vocab::OWL, vocab::XSD, vocab::SKOS];

fn is_external(iri: &Iri) -> bool {
    !INTERNAL_NAMESPACES.iter().any(|ns| iri.as_str().starts_with(ns))
}

/// Subjects typed with a class that is not a schema-level metaclass.
fn instances(graph: &Graph) -> BTreeSet<Term> {
    let meta = [
        vocab::OWL_CLASS,
        vocab::RDFS_CLASS,
        vocab::OWL_OBJECT_PROPERTY,
        vocab::OWL_DATATYPE_PROPERTY,
        vocab::OWL_FUNCTIONAL_PROPERTY,
    ];
    graph
        .pairs(&terms::rdf_type())
        .filter(|(_, c)| c.as_iri().is_none_or(|c| !meta.contains(&c.as_str())))
        .map(|(s, _)| s.clone())
        .collect()
}

fn interlinking(graph: &Graph) -> (f64, Vec<String>) {
    let all = instances(graph);
    let mut unlinked = Vec::new();
    for i in &all {
        let linked = graph
            .matching_unordered(Some(i), None, None)
            .iter()
            .any(|t| t.object().as_iri().is_some_and(is_external));
        if !linked {
            unlinked.push(format!("{} has no external link", term_name(graph, i)));
        }
    }
    unlinked.sort();
    (ratio(all.len() - unlinked.len(), all.len()), unlinked)
}

/// Nearest-rank 95th percentile.
fn p95(samples: &mut [Duration]) -> Duration {
    samples.sort();
    let rank = ((samples.len() as f64) * 0.95).ceil() as usize;
    samples[rank.clamp(1, samples.len()) - 1]
}

fn performance(graph: &Graph, config: &QualityConfig) -> (f64, Vec<String>) {
    let queries: Vec<dlq::ClassExpression> = BENCHMARK_QUERIES
        .iter()
        .map(|q| dlq::parse(q, graph.prefixes()).expect("benchmark queries parse"))
        .collect();
    let mut samples = Vec::with_capacity(queries.len() * config.benchmark_rounds.max(1));
    for _ in 0..config.benchmark_rounds.max(1) {
        for q in &queries {
            let start = Instant::now();
            std::hint::black_box(dlq::evaluate(q, graph));
            samples.push(start.elapsed());
        }
    }
    let observed = p95(&mut samples);
    let budget = config.latency_budget.as_secs_f64();
    let score = if observed.is_zero() { 1.0 } else { (budget / observed.as_secs_f64()).min(1.0) };
    let detail = format!(
        "p95 {:.3} ms over {} runs, budget {:.3} ms",
        observed.as_secs_f64() * 1000.0,
        samples.len(),
        budget * 1000.0
    );
    (score, vec![detail])
}

fn relevancy(graph: &Graph, config: &QualityConfig) -> (f64, Vec<String>) {
    let mut total = 0;
    let mut untrusted: BTreeMap<String, usize> = BTreeMap::new();
    for (_, prov) in graph.provenance_entries() {
        total += 1;
        if !config.is_trusted(&prov.source) {
            *untrusted.entry(prov.source.clone()).or_default() += 1;
        }
    }
    let bad: usize = untrusted.values().sum();
    let mut details: Vec<String> = untrusted
        .into_iter()
        .map(|(s, n)| format!("{n} triples from untrusted source {s:?}"))
        .collect();
    if total == 0 {
        details.push("no triple carries provenance".into());
    }
    (ratio(total - bad, total), details)
}

fn term_name(graph: &Graph, t: &Term) -> String {
    t.as_iri().map_or_else(|| t.to_string(), |i| graph.compact(i))
}

/// Assesses `graph`. Dimensions other than performance are deterministic
/// for a fixed graph and config.
pub fn assess(graph: &Graph, config: &QualityConfig, clock: &Clock) -> QualityReport {
    let mut scores = BTreeMap::new();
    let mut details = BTreeMap::new();
    if graph.is_empty() {
        for d in Dimension::ALL {
            let (score, detail) = match d {
                Dimension::Conciseness => (1.0, Vec::new()),
                _ => (0.0, vec!["empty graph".to_owned()]),
            };
            scores.insert(d, score);
            details.insert(d, detail);
        }
        return QualityReport {
            note: FORMULA_NOTE.into(),
            scores,
            details,
            generated_at: clock.now(),
        };
    }
    let saturated;
    let target = if config.saturate {
        saturated = saturate(graph, &builtin_rules(), clock).graph;
        &saturated
    } else {
        graph
    };
    let ((avail, (compl, inter)), rel) = rayon::join(
        || rayon::join(|| availability(target), || rayon::join(|| completeness(target, config), || interlinking(target))),
        || relevancy(target, config),
    );
    let results = [
        (Dimension::Availability, avail),
        (Dimension::Completeness, compl),
        // Ingestion counters belong to the graph as loaded.
        (Dimension::Conciseness, conciseness(graph)),
        (Dimension::Interlinking, inter),
        (Dimension::Relevancy, rel),
        (Dimension::Performance, performance(target, config)),
    ];
    for (d, (score, detail)) in results {
        scores.insert(d, score.clamp(0.0, 1.0));
        details.insert(d, detail);
    }
    QualityReport {
        note: FORMULA_NOTE.into(),
        scores,
        details,
        generated_at: clock.now(),
    }
}
