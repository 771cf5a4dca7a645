//! Consistency checking against the constraints a graph declares about
//! itself: disjoint classes, functional properties, allowed values,
//! required properties and integer lower bounds.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::ontology::terms;
use crate::rdf::{sort_canonical, Graph, Iri, Term, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum InconsistencyKind {
    DisjointViolation,
    FunctionalKeyViolation,
    RangeViolation,
    CardinalityViolation,
}

impl fmt::Display for InconsistencyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InconsistencyKind::DisjointViolation => "DisjointViolation",
            InconsistencyKind::FunctionalKeyViolation => "FunctionalKeyViolation",
            InconsistencyKind::RangeViolation => "RangeViolation",
            InconsistencyKind::CardinalityViolation => "CardinalityViolation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inconsistency {
    pub kind: InconsistencyKind,
    /// Never empty; canonical order.
    pub offending: Vec<Triple>,
    pub message: String,
}

impl Inconsistency {
    fn new(kind: InconsistencyKind, mut offending: Vec<Triple>, message: String) -> Self {
        debug_assert!(!offending.is_empty());
        sort_canonical(&mut offending);
        Inconsistency {
            kind,
            offending,
            message,
        }
    }
}

impl fmt::Display for Inconsistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

/// Constraint declarations read from a graph.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Constraints {
    /// Unordered pairs, each stored once with the smaller IRI first.
    pub disjoint: BTreeSet<(Iri, Iri)>,
    pub functional: BTreeSet<Iri>,
    pub allowed_values: BTreeMap<Iri, BTreeSet<Term>>,
    pub required: BTreeMap<Iri, BTreeSet<Iri>>,
    pub min_inclusive: BTreeMap<Iri, i64>,
}

impl Constraints {
    /// Reads `owl:disjointWith`, `owl:FunctionalProperty`,
    /// `ono:allowedValue`, `ono:requiresProperty` and `ono:minInclusive`.
    pub fn from_graph(graph: &Graph) -> Self {
        let mut c = Constraints::default();
        for (a, b) in graph.pairs(&terms::disjoint_with()) {
            if let (Some(a), Some(b)) = (a.as_iri(), b.as_iri()) {
                c.disjoint.insert(if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) });
            }
        }
        for p in graph.subjects(&terms::rdf_type(), &Term::Iri(terms::functional_property())) {
            if let Some(p) = p.as_iri() {
                c.functional.insert(p.clone());
            }
        }
        for (p, v) in graph.pairs(&terms::allowed_value()) {
            if let Some(p) = p.as_iri() {
                c.allowed_values.entry(p.clone()).or_default().insert(v.clone());
            }
        }
        for (class, p) in graph.pairs(&terms::requires_property()) {
            if let (Some(class), Some(p)) = (class.as_iri(), p.as_iri()) {
                c.required.entry(class.clone()).or_default().insert(p.clone());
            }
        }
        for (p, v) in graph.pairs(&terms::min_inclusive()) {
            if let (Some(p), Some(n)) = (p.as_iri(), v.as_literal().and_then(|l| l.as_integer())) {
                let entry = c.min_inclusive.entry(p.clone()).or_insert(n);
                *entry = (*entry).max(n);
            }
        }
        c
    }

    pub fn is_empty(&self) -> bool {
        self.disjoint.is_empty()
            && self.functional.is_empty()
            && self.allowed_values.is_empty()
            && self.required.is_empty()
            && self.min_inclusive.is_empty()
    }
}

fn type_triple(x: &Term, class: &Iri) -> Triple {
    Triple::new(x.clone(), terms::rdf_type(), Term::Iri(class.clone())).expect("instances are not literals")
}

/// Reports every violation of `constraints` in `graph`, which should be
/// saturated so that inferred types are seen. Order is by kind, then by
/// offending triples.
pub fn check_consistency(graph: &Graph, constraints: &Constraints) -> Vec<Inconsistency> {
    let rdf_type = terms::rdf_type();
    let mut out = Vec::new();

    for (a, b) in &constraints.disjoint {
        let a_term = Term::Iri(a.clone());
        let b_term = Term::Iri(b.clone());
        for x in graph.subjects(&rdf_type, &a_term) {
            if a != b && graph.has(x, &rdf_type, &b_term) {
                out.push(Inconsistency::new(
                    InconsistencyKind::DisjointViolation,
                    vec![type_triple(x, a), type_triple(x, b)],
                    format!("{x} is typed by disjoint classes {a} and {b}"),
                ));
            }
        }
    }

    for p in &constraints.functional {
        let mut by_subject: BTreeMap<&Term, Vec<&Term>> = BTreeMap::new();
        for (s, o) in graph.pairs(p) {
            by_subject.entry(s).or_default().push(o);
        }
        for (s, objects) in by_subject.into_iter().filter(|(_, o)| o.len() > 1) {
            let offending = objects
                .iter()
                .map(|o| Triple::new(s.clone(), p.clone(), (*o).clone()).expect("indexed triple"))
                .collect();
            out.push(Inconsistency::new(
                InconsistencyKind::FunctionalKeyViolation,
                offending,
                format!("{s} has {} distinct values for functional {p}", objects.len()),
            ));
        }
    }

    for (p, allowed) in &constraints.allowed_values {
        for (s, o) in graph.pairs(p) {
            if !allowed.contains(o) {
                out.push(Inconsistency::new(
                    InconsistencyKind::RangeViolation,
                    vec![Triple::new(s.clone(), p.clone(), o.clone()).expect("indexed triple")],
                    format!("{o} is not an allowed value of {p}"),
                ));
            }
        }
    }

    for (class, props) in &constraints.required {
        for x in graph.subjects(&rdf_type, &Term::Iri(class.clone())) {
            for p in props {
                if graph.objects(x, p).next().is_none() {
                    out.push(Inconsistency::new(
                        InconsistencyKind::CardinalityViolation,
                        vec![type_triple(x, class)],
                        format!("{x} is a {class} without {p}"),
                    ));
                }
            }
        }
    }

    for (p, min) in &constraints.min_inclusive {
        for (s, o) in graph.pairs(p) {
            let value = o.as_literal().and_then(|l| l.as_integer());
            if value.is_none_or(|v| v < *min) {
                out.push(Inconsistency::new(
                    InconsistencyKind::CardinalityViolation,
                    vec![Triple::new(s.clone(), p.clone(), o.clone()).expect("indexed triple")],
                    format!("{s} has {p} {o}, below the minimum {min}"),
                ));
            }
        }
    }

    out.sort_by(|a, b| {
        a.kind.cmp(&b.kind).then_with(|| {
            let ka: Vec<_> = a.offending.iter().map(Triple::canonical_key).collect();
            let kb: Vec<_> = b.offending.iter().map(Triple::canonical_key).collect();
            ka.cmp(&kb).then_with(|| a.message.cmp(&b.message))
        })
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::parse_turtle_subset;

    const CONSTRAINED: &str = r#"@prefix ono: <http://onconet.example/ono#> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
ono:Cancer owl:disjointWith ono:Biomarker .
ono:hasSignificance a owl:FunctionalProperty ; ono:allowedValue ono:HIGH , ono:LOW .
ono:Biomarker ono:requiresProperty ono:evidenceType .
ono:hasCitations ono:minInclusive 1 .
"#;

    #[test]
    fn no_declarations_no_report() {
        let g = parse_turtle_subset(
            "@prefix ono: <http://onconet.example/ono#> .\n\
             ono:x a ono:Cancer , ono:Biomarker ; ono:hasCitations 0 .",
        )
        .unwrap();
        assert!(Constraints::from_graph(&g).is_empty());
        assert!(check_consistency(&g, &Constraints::from_graph(&g)).is_empty());
    }

    #[test]
    fn each_kind_detected() {
        let text = format!(
            "{CONSTRAINED}ono:x a ono:Cancer , ono:Biomarker ; ono:evidenceType ono:PubMed ; ono:hasCitations 0 .\n\
             ono:f ono:hasSignificance ono:HIGH , ono:MEDIUM .\n\
             ono:y a ono:Biomarker ; ono:hasCitations 3 .\n"
        );
        let g = parse_turtle_subset(&text).unwrap();
        let report = check_consistency(&g, &Constraints::from_graph(&g));
        let kinds: Vec<_> = report.iter().map(|r| r.kind).collect();
        use InconsistencyKind::*;
        assert_eq!(
            kinds,
            vec![DisjointViolation, FunctionalKeyViolation, RangeViolation, CardinalityViolation, CardinalityViolation]
        );
        assert_eq!(
            report[1].offending,
            vec![Triple::ono("f", "hasSignificance", "HIGH"), Triple::ono("f", "hasSignificance", "MEDIUM")]
        );
        assert_eq!(report[2].offending, vec![Triple::ono("f", "hasSignificance", "MEDIUM")]);
    }
}
