//! Classifying parsed triples against the KG and applying them under a
//! policy, with a review queue and an audit trail.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::clock::Clock;
use crate::ontology::terms;
use crate::rdf::{sort_canonical, Graph, Iri, Provenance, Term, Triple};
use crate::reasoner::{check_consistency, Constraints, Inconsistency, InconsistencyKind, Saturation};

use super::response::ParsedResponse;

/// Extractor recorded on triples inserted from model output.
pub const LLM_EXTRACTOR: &str = "llm";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffEntry {
    pub line: usize,
    pub text: String,
    /// `None` for response lines that did not parse into a triple.
    pub triple: Option<Triple>,
    pub reason: String,
}

/// Pairwise-disjoint classification of one response.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DiffReport {
    pub new: Vec<DiffEntry>,
    pub confirmed: Vec<DiffEntry>,
    pub conflicting: Vec<DiffEntry>,
    /// Parse rejects and domain/range violations.
    pub invalid: Vec<DiffEntry>,
}

impl DiffReport {
    pub fn len(&self) -> usize {
        self.new.len() + self.confirmed.len() + self.conflicting.len() + self.invalid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sizes as (new, confirmed, conflicting, invalid).
    pub fn sizes(&self) -> (usize, usize, usize, usize) {
        (self.new.len(), self.confirmed.len(), self.conflicting.len(), self.invalid.len())
    }
}

fn member(graph: &Graph, x: &Term, class: &Iri) -> bool {
    let c = Term::Iri(class.clone());
    x == &c || graph.has(x, &terms::rdf_type(), &c) || graph.has(x, &terms::subclass_of(), &c)
}

fn domain_range_violation(graph: &Graph, t: &Triple) -> Option<String> {
    let p = Term::Iri(t.predicate().clone());
    for d in graph.objects(&p, &terms::domain()).filter_map(|d| d.as_iri()) {
        if !member(graph, t.subject(), d) {
            return Some(format!("subject {} is not a {}", graph_name(graph, t.subject()), graph.compact(d)));
        }
    }
    for r in graph.objects(&p, &terms::range()).filter_map(|r| r.as_iri()) {
        let ok = match t.object() {
            Term::Literal(l) => l.datatype() == r,
            other => member(graph, other, r),
        };
        if !ok {
            return Some(format!("object {} is not a {}", graph_name(graph, t.object()), graph.compact(r)));
        }
    }
    None
}

fn graph_name(graph: &Graph, t: &Term) -> String {
    t.as_iri().map_or_else(|| t.to_string(), |i| graph.compact(i))
}

fn conflict_kinds(v: &Inconsistency) -> bool {
    matches!(
        v.kind,
        InconsistencyKind::FunctionalKeyViolation | InconsistencyKind::DisjointViolation
    )
}

/// Classifies each parsed triple, in response order: `confirmed` when the
/// saturated KG already holds it, `invalid` on a domain or range violation,
/// `conflicting` when adding it (with the new triples accepted so far) and
/// re-saturating creates a functional-key or disjointness violation, and
/// `new` otherwise. Parse rejects are `invalid`.
pub fn triage(parsed: &ParsedResponse, kg: &Saturation, clock: &Clock) -> DiffReport {
    let constraints = Constraints::from_graph(&kg.graph);
    let baseline: Vec<Inconsistency> = check_consistency(&kg.graph, &constraints)
        .into_iter()
        .filter(conflict_kinds)
        .collect();
    let mut scratch = kg.clone();
    let mut report = DiffReport::default();
    for r in &parsed.rejects {
        report.invalid.push(DiffEntry {
            line: r.line,
            text: r.text.clone(),
            triple: None,
            reason: r.reason.clone(),
        });
    }
    for p in &parsed.triples {
        let entry = |reason: String| DiffEntry {
            line: p.line,
            text: p.text.clone(),
            triple: Some(p.triple.clone()),
            reason,
        };
        if kg.graph.contains(&p.triple) {
            let why = if kg.is_inferred(&p.triple) { "already inferred" } else { "already asserted" };
            report.confirmed.push(entry(why.into()));
            continue;
        }
        if scratch.graph.contains(&p.triple) {
            report.new.push(entry("implied by earlier lines".into()));
            continue;
        }
        if let Some(reason) = domain_range_violation(&scratch.graph, &p.triple) {
            report.invalid.push(entry(reason));
            continue;
        }
        let mut trial = scratch.clone();
        trial.extend([(p.triple.clone(), None)], clock);
        let fresh: Vec<String> = check_consistency(&trial.graph, &constraints)
            .into_iter()
            .filter(|v| conflict_kinds(v) && !baseline.contains(v))
            .map(|v| v.to_string())
            .collect();
        if fresh.is_empty() {
            scratch = trial;
            report.new.push(entry("passes validation".into()));
        } else {
            report.conflicting.push(entry(fresh.join("; ")));
        }
    }
    let by_line = |a: &DiffEntry, b: &DiffEntry| a.line.cmp(&b.line);
    report.invalid.sort_by(by_line);
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Insert `new`; queue conflicts.
    #[default]
    AcceptNew,
    /// Insert `new`; queue conflicts and invalid triples.
    AcceptNewAndQueueConflicts,
    /// Change nothing in the KG; queue conflicts and log what would happen.
    DryRun,
}

impl Policy {
    pub fn as_str(self) -> &'static str {
        match self {
            Policy::AcceptNew => "accept_new",
            Policy::AcceptNewAndQueueConflicts => "accept_new_and_queue_conflicts",
            Policy::DryRun => "dry_run",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Policy::AcceptNew, Policy::AcceptNewAndQueueConflicts, Policy::DryRun]
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown policy {s:?}"))
    }
}

/// Triples held back for a human, with the reason.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ReviewQueue {
    pub entries: Vec<(Triple, String)>,
}

impl ReviewQueue {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Canonical N-Triples, each statement preceded by `# reason:` lines.
    pub fn render(&self) -> String {
        let mut entries = self.entries.clone();
        entries.sort_by(|a, b| a.0.canonical_key().cmp(&b.0.canonical_key()).then_with(|| a.1.cmp(&b.1)));
        entries.dedup();
        let mut out = String::new();
        for (t, reason) in entries {
            for r in reason.lines() {
                out.push_str("# reason: ");
                out.push_str(r);
                out.push('\n');
            }
            out.push_str(&t.to_ntriples());
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    /// N-Triples statement, or the raw line when it did not parse.
    pub triple: String,
    pub verdict: String,
    pub reason: String,
    pub timestamp: chrono::DateTime<chrono::Utc>,
}

/// Every decision taken, in order.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct AuditLog {
    pub entries: Vec<AuditEntry>,
}

impl AuditLog {
    /// One JSON object per line.
    pub fn to_jsonl(&self) -> String {
        self.entries
            .iter()
            .map(|e| serde_json::to_string(e).expect("audit entry serialises") + "\n")
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ApplyReport {
    pub inserted: Vec<Triple>,
    pub queued: usize,
}

/// Applies a diff to `kg` under `policy`. Conflicts are never inserted;
/// they go to `queue` under every policy. Inserted triples carry
/// `(source, "llm", 1.0, now)` provenance.
pub fn apply(
    diff: &DiffReport,
    kg: &mut Graph,
    policy: Policy,
    source: &str,
    clock: &Clock,
    queue: &mut ReviewQueue,
    audit: &mut AuditLog,
) -> ApplyReport {
    let now = clock.now();
    let mut report = ApplyReport::default();
    let mut log = |e: &DiffEntry, verdict: &str| {
        audit.entries.push(AuditEntry {
            triple: e.triple.as_ref().map_or_else(|| e.text.clone(), Triple::to_ntriples),
            verdict: verdict.to_owned(),
            reason: e.reason.clone(),
            timestamp: now,
        })
    };
    let mut ordered: Vec<(&DiffEntry, &str)> = Vec::with_capacity(diff.len());
    ordered.extend(diff.new.iter().map(|e| (e, "new")));
    ordered.extend(diff.confirmed.iter().map(|e| (e, "confirmed")));
    ordered.extend(diff.conflicting.iter().map(|e| (e, "conflicting")));
    ordered.extend(diff.invalid.iter().map(|e| (e, "invalid")));
    ordered.sort_by_key(|(e, _)| e.line);
    for (e, class) in ordered {
        match (class, policy) {
            ("new", Policy::DryRun) => log(e, "would_insert"),
            ("new", _) => {
                let t = e.triple.clone().expect("new entries carry triples");
                let prov = Provenance::new(source, LLM_EXTRACTOR, 1.0, now).expect("valid confidence");
                if kg.insert(t.clone(), Some(prov)) {
                    report.inserted.push(t);
                    log(e, "inserted");
                } else {
                    log(e, "duplicate");
                }
            }
            ("confirmed", _) => log(e, "confirmed"),
            ("conflicting", _) => {
                queue.entries.push((e.triple.clone().expect("conflicts carry triples"), e.reason.clone()));
                report.queued += 1;
                log(e, "queued_conflict");
            }
            ("invalid", Policy::AcceptNewAndQueueConflicts) if e.triple.is_some() => {
                queue.entries.push((e.triple.clone().expect("checked"), e.reason.clone()));
                report.queued += 1;
                log(e, "queued_invalid");
            }
            _ => log(e, "rejected"),
        }
    }
    sort_canonical(&mut report.inserted);
    report
}
