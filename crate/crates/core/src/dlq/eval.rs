//! Closed-world evaluation of class expressions over a saturated graph.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::{Serialize, Serializer};

use crate::ontology::terms;
use crate::rdf::{Graph, Iri, Term};

use super::parse::ClassExpression;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueryResult {
    /// Canonical (IRI) order.
    pub individuals: Vec<Iri>,
    /// Role assertions and type assertions consulted during evaluation.
    pub bindings_count: usize,
    #[serde(serialize_with = "millis")]
    pub elapsed: Duration,
    /// Result individuals admitted by an `only` restriction only because
    /// they have no successor for its role.
    pub vacuous_only: usize,
    pub warnings: Vec<String>,
}

fn millis<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1000.0)
}

impl QueryResult {
    /// Result lines as printed by the CLI: one name per line, then the
    /// summary line.
    pub fn render(&self, graph: &Graph) -> String {
        let mut out = String::new();
        for iri in &self.individuals {
            out.push_str(&graph.compact(iri));
            out.push('\n');
        }
        out.push_str(&self.summary());
        out.push('\n');
        out
    }

    pub fn summary(&self) -> String {
        format!(
            "count={} elapsed_ms={:.3} vacuous_only={}",
            self.individuals.len(),
            self.elapsed.as_secs_f64() * 1000.0,
            self.vacuous_only
        )
    }
}

struct Evaluator<'g> {
    graph: &'g Graph,
    universe: BTreeSet<Iri>,
    bindings: usize,
    warnings: Vec<String>,
}

/// Individuals and the subset admitted vacuously by an `only`.
type Interp = (BTreeSet<Iri>, BTreeSet<Iri>);

impl<'g> Evaluator<'g> {
    fn known(&self, iri: &Iri) -> bool {
        let t = Term::Iri(iri.clone());
        self.graph.mentions(&t) || self.graph.predicates().any(|p| p == iri)
    }

    fn check(&mut self, what: &str, iri: &Iri) -> bool {
        if self.known(iri) {
            return true;
        }
        let w = format!("unknown {what} {}", self.graph.compact(iri));
        if !self.warnings.contains(&w) {
            self.warnings.push(w);
        }
        false
    }

    fn subjects(&mut self, p: &Iri, o: &Iri) -> BTreeSet<Iri> {
        let out: BTreeSet<Iri> = self
            .graph
            .subjects(p, &Term::Iri(o.clone()))
            .filter_map(|s| s.as_iri().cloned())
            .collect();
        self.bindings += out.len();
        out
    }

    /// `{NAME}` together with its instances and subclasses, so a filler
    /// works whether NAME is an individual or a class.
    fn filler(&mut self, name: &Iri) -> BTreeSet<Iri> {
        let mut out = self.subjects(&terms::rdf_type(), name);
        out.extend(self.subjects(&terms::subclass_of(), name));
        out.insert(name.clone());
        out
    }

    fn eval(&mut self, expr: &ClassExpression) -> Interp {
        match expr {
            ClassExpression::Atom { class } => {
                if !self.check("class", class) {
                    return Default::default();
                }
                (self.subjects(&terms::rdf_type(), class), BTreeSet::new())
            }
            ClassExpression::And { children } => {
                let mut parts = children.iter().map(|c| self.eval(c)).collect::<Vec<_>>().into_iter();
                let (mut set, mut vacuous) = parts.next().unwrap_or_default();
                for (s, v) in parts {
                    set = set.intersection(&s).cloned().collect();
                    vacuous.extend(v);
                }
                vacuous.retain(|x| set.contains(x));
                (set, vacuous)
            }
            ClassExpression::Some { role, filler } => {
                if !(self.check("role", role) & self.check("filler", filler)) {
                    return Default::default();
                }
                let mut out = BTreeSet::new();
                for y in self.filler(filler) {
                    out.extend(self.subjects(role, &y));
                }
                (out, BTreeSet::new())
            }
            ClassExpression::Only { role, filler } => {
                if !(self.check("role", role) & self.check("filler", filler)) {
                    return Default::default();
                }
                let allowed = self.filler(filler);
                let mut out = BTreeSet::new();
                let mut vacuous = BTreeSet::new();
                for x in &self.universe {
                    let successors: Vec<&Term> = self.graph.objects(&Term::Iri(x.clone()), role).collect();
                    self.bindings += successors.len();
                    if successors.is_empty() {
                        vacuous.insert(x.clone());
                        out.insert(x.clone());
                    } else if successors.iter().all(|y| y.as_iri().is_some_and(|y| allowed.contains(y))) {
                        out.insert(x.clone());
                    }
                }
                (out, vacuous)
            }
            ClassExpression::Value { role, individual } => {
                if !(self.check("role", role) & self.check("individual", individual)) {
                    return Default::default();
                }
                (self.subjects(role, individual), BTreeSet::new())
            }
        }
    }
}

/// Every IRI in subject or object position: the domain `only` ranges over.
pub fn individuals(graph: &Graph) -> BTreeSet<Iri> {
    graph
        .subject_terms()
        .chain(graph.object_terms())
        .filter_map(|t| t.as_iri().cloned())
        .collect()
}

/// Evaluates `expr` under the closed-world reading. Unknown names produce
/// a warning and an empty interpretation for the conjunct that uses them.
pub fn evaluate(expr: &ClassExpression, graph: &Graph) -> QueryResult {
    let start = Instant::now();
    let mut ev = Evaluator {
        graph,
        universe: individuals(graph),
        bindings: 0,
        warnings: Vec::new(),
    };
    let (set, vacuous) = ev.eval(expr);
    QueryResult {
        individuals: set.into_iter().collect(),
        bindings_count: ev.bindings,
        elapsed: start.elapsed(),
        vacuous_only: vacuous.len(),
        warnings: ev.warnings,
    }
}
