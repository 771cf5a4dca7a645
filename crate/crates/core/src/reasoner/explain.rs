//! Derivation trees for asserted and inferred triples.

use std::fmt::Write as _;

use serde::Serialize;

use crate::rdf::{Graph, Provenance, Triple};

use super::saturate::Saturation;
use super::ReasonerError;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Explanation {
    Asserted {
        triple: Triple,
        provenance: Option<Provenance>,
    },
    Inferred {
        triple: Triple,
        rule: String,
        premises: Vec<Explanation>,
    },
}

impl Explanation {
    pub fn triple(&self) -> &Triple {
        match self {
            Explanation::Asserted { triple, .. } | Explanation::Inferred { triple, .. } => triple,
        }
    }

    /// Number of levels; a leaf has depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Explanation::Asserted { .. } => 1,
            Explanation::Inferred { premises, .. } => 1 + premises.iter().map(Explanation::depth).max().unwrap_or(0),
        }
    }

    /// Asserted triples at the leaves, left to right.
    pub fn leaves(&self) -> Vec<&Triple> {
        match self {
            Explanation::Asserted { triple, .. } => vec![triple],
            Explanation::Inferred { premises, .. } => premises.iter().flat_map(Explanation::leaves).collect(),
        }
    }

    /// Indented text rendering with prefixed names.
    pub fn render(&self, graph: &Graph) -> String {
        let mut out = String::new();
        self.render_into(graph, 0, &mut out);
        out
    }

    fn render_into(&self, graph: &Graph, indent: usize, out: &mut String) {
        let t = self.triple();
        let _ = write!(
            out,
            "{:indent$}({} {} {})",
            "",
            compact_term(graph, t.subject()),
            graph.compact(t.predicate()),
            compact_term(graph, t.object()),
            indent = indent * 2
        );
        match self {
            Explanation::Asserted { provenance, .. } => {
                let source = provenance.as_ref().map_or("unknown", |p| p.source.as_str());
                let _ = writeln!(out, "  asserted({source})");
            }
            Explanation::Inferred { rule, premises, .. } => {
                let _ = writeln!(out, "  by {rule}");
                for p in premises {
                    p.render_into(graph, indent + 1, out);
                }
            }
        }
    }
}

fn compact_term(graph: &Graph, term: &crate::rdf::Term) -> String {
    match term.as_iri() {
        Some(iri) => graph.compact(iri),
        None => term.to_string(),
    }
}

/// Explains a triple of a saturated graph. Asserted triples become leaves
/// carrying their provenance; inferred ones expand through the rule that
/// first derived them.
pub fn explain(saturation: &Saturation, triple: &Triple) -> Result<Explanation, ReasonerError> {
    if !saturation.graph.contains(triple) {
        return Err(ReasonerError::NotFound(triple.to_string()));
    }
    Ok(build(saturation, triple))
}

fn build(saturation: &Saturation, triple: &Triple) -> Explanation {
    match saturation.derivations.get(triple) {
        None => Explanation::Asserted {
            triple: triple.clone(),
            provenance: saturation.graph.provenance(triple).cloned(),
        },
        // Premises always come from earlier rounds, so recursion ends.
        Some(d) => Explanation::Inferred {
            triple: triple.clone(),
            rule: d.rule.clone(),
            premises: d.premises.iter().map(|p| build(saturation, p)).collect(),
        },
    }
}
