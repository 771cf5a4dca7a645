//! Fresh instance minting for associations with external ontology classes.

use crate::rdf::{Graph, Iri, Term, Triple};

use super::terms;

const ASSOCIATION_PATH: &str = "association/";

/// Mints `ono:association/<n>` IRIs from a counter.
#[derive(Debug, Clone)]
pub struct InstanceMinter {
    next: u64,
}

impl Default for InstanceMinter {
    fn default() -> Self {
        InstanceMinter { next: 1 }
    }
}

impl InstanceMinter {
    pub fn new() -> Self {
        Self::default()
    }

    /// A minter whose first IRI is not yet mentioned in `graph`.
    pub fn for_graph(graph: &Graph) -> Self {
        let prefix = crate::rdf::vocab::ono(ASSOCIATION_PATH);
        let highest = graph
            .subject_terms()
            .chain(graph.object_terms())
            .filter_map(Term::as_iri)
            .filter_map(|iri| iri.as_str().strip_prefix(prefix.as_str()))
            .filter_map(|n| n.parse::<u64>().ok())
            .max()
            .unwrap_or(0);
        InstanceMinter { next: highest + 1 }
    }

    pub fn mint(&mut self) -> Iri {
        let iri = Iri::ono(&format!("{ASSOCIATION_PATH}{}", self.next));
        self.next += 1;
        iri
    }
}

/// Links `gene` to a freshly minted instance `f` of `class`:
/// `(gene, property, f)` and `(f, rdf:type, class)`.
/// `property` is usually `ono:hasGOAssociation`.
pub fn instance_axioms(minter: &mut InstanceMinter, gene: &Iri, property: &Iri, class: &Iri) -> [Triple; 2] {
    let f = minter.mint();
    [
        Triple::new(Term::Iri(gene.clone()), property.clone(), Term::Iri(f.clone())).expect("IRI subject"),
        Triple::new(Term::Iri(f), terms::rdf_type(), Term::Iri(class.clone())).expect("IRI subject"),
    ]
}
