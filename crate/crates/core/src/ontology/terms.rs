//! IRIs of the ONO classes and properties.

use crate::rdf::vocab;
use crate::rdf::Iri;

macro_rules! ono_terms {
    ($($fn_name:ident => $local:literal),* $(,)?) => {
        $(
            pub fn $fn_name() -> Iri {
                Iri::ono($local)
            }
        )*
    };
}

ono_terms! {
    disease => "Disease",
    cancer => "Cancer",
    biomarker => "Biomarker",
    feature => "Feature",
    biomarker_type_class => "BiomarkerType",
    significance_class => "Significance",
    evidence_source => "EvidenceSource",
    is_a => "isA",
    has_type => "hasType",
    causes => "causes",
    has_evidence => "hasEvidence",
    gene_type => "geneType",
    cross_responsibility => "crossResponsibility",
    evidence_type => "evidenceType",
    has_citations => "hasCitations",
    external_ref => "externalRef",
    has_go_association => "hasGOAssociation",
    feature_of => "featureOf",
    in_cancer => "inCancer",
    has_significance => "hasSignificance",
    biomarker_type => "biomarkerType",
    high_in => "highIn",
    medium_in => "mediumIn",
    low_in => "lowIn",
    non_tcga => "nonTcga",
    allowed_value => "allowedValue",
    requires_property => "requiresProperty",
    min_inclusive => "minInclusive",
}

pub fn rdf_type() -> Iri {
    Iri::from_static(vocab::RDF_TYPE)
}

pub fn subclass_of() -> Iri {
    Iri::from_static(vocab::RDFS_SUBCLASS_OF)
}

pub fn subproperty_of() -> Iri {
    Iri::from_static(vocab::RDFS_SUBPROPERTY_OF)
}

pub fn domain() -> Iri {
    Iri::from_static(vocab::RDFS_DOMAIN)
}

pub fn range() -> Iri {
    Iri::from_static(vocab::RDFS_RANGE)
}

pub fn label() -> Iri {
    Iri::from_static(vocab::RDFS_LABEL)
}

pub fn alt_label() -> Iri {
    Iri::from_static(vocab::SKOS_ALT_LABEL)
}

pub fn owl_class() -> Iri {
    Iri::from_static(vocab::OWL_CLASS)
}

pub fn object_property() -> Iri {
    Iri::from_static(vocab::OWL_OBJECT_PROPERTY)
}

pub fn functional_property() -> Iri {
    Iri::from_static(vocab::OWL_FUNCTIONAL_PROPERTY)
}

pub fn disjoint_with() -> Iri {
    Iri::from_static(vocab::OWL_DISJOINT_WITH)
}
