//! Namespace constants and the registered prefix table.

pub const ONO: &str = "http://onconet.example/ono#";
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const SKOS: &str = "http://www.w3.org/2004/02/skos/core#";
pub const DOID: &str = "http://purl.obolibrary.org/obo/DOID_";
pub const OGG: &str = "http://purl.obolibrary.org/obo/OGG_";
pub const GO: &str = "http://purl.obolibrary.org/obo/GO_";
pub const MESH: &str = "http://id.nlm.nih.gov/mesh/";
pub const PUBMED: &str = "https://pubmed.ncbi.nlm.nih.gov/";
pub const ENTREZ: &str = "https://www.ncbi.nlm.nih.gov/gene/";

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDF_LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
pub const RDFS_SUBCLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
pub const RDFS_SUBPROPERTY_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subPropertyOf";
pub const RDFS_DOMAIN: &str = "http://www.w3.org/2000/01/rdf-schema#domain";
pub const RDFS_RANGE: &str = "http://www.w3.org/2000/01/rdf-schema#range";
pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
pub const RDFS_CLASS: &str = "http://www.w3.org/2000/01/rdf-schema#Class";
pub const SKOS_ALT_LABEL: &str = "http://www.w3.org/2004/02/skos/core#altLabel";
pub const OWL_CLASS: &str = "http://www.w3.org/2002/07/owl#Class";
pub const OWL_OBJECT_PROPERTY: &str = "http://www.w3.org/2002/07/owl#ObjectProperty";
pub const OWL_DATATYPE_PROPERTY: &str = "http://www.w3.org/2002/07/owl#DatatypeProperty";
pub const OWL_FUNCTIONAL_PROPERTY: &str = "http://www.w3.org/2002/07/owl#FunctionalProperty";
pub const OWL_DISJOINT_WITH: &str = "http://www.w3.org/2002/07/owl#disjointWith";
pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";

/// Prefixes every graph starts with. The external biomedical namespaces are
/// read-only: nothing in this crate mints IRIs under them.
pub const DEFAULT_PREFIXES: &[(&str, &str)] = &[
    ("ono", ONO),
    ("rdf", RDF),
    ("rdfs", RDFS),
    ("owl", OWL),
    ("xsd", XSD),
    ("skos", SKOS),
    ("doid", DOID),
    ("ogg", OGG),
    ("go", GO),
    ("mesh", MESH),
    ("pubmed", PUBMED),
    ("entrez", ENTREZ),
];

/// Namespaces that belong to the vocabulary layer rather than to external
/// knowledge sources.
pub const INTERNAL_NAMESPACES: &[&str] = &[ONO, RDF, RDFS, OWL, XSD, SKOS];

/// Full IRI for a local name in the project namespace.
pub fn ono(local: &str) -> String {
    format!("{ONO}{local}")
}

/// `true` when the IRI lives under one of the external biomedical namespaces
/// (anything that is neither ONO nor a W3C vocabulary).
pub fn is_external(iri: &str) -> bool {
    !INTERNAL_NAMESPACES.iter().any(|ns| iri.starts_with(ns))
}
