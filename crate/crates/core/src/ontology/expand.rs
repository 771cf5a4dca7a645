//! Expansion of a gene record into ONO triples.

use crate::rdf::{Literal, Term, Triple};

use super::model::{feature_iri, GeneRecord};
use super::terms;
use super::OntologyError;

fn triple(s: impl Into<Term>, p: crate::rdf::Iri, o: impl Into<Term>) -> Triple {
    Triple::new(s.into(), p, o.into()).expect("expansion never puts a literal in subject position")
}

/// Expands a validated record: the Biomarker type triple, one `geneType`
/// triple per type, the citation count, evidence and external links, and
/// for every responsible cancer a `crossResponsibility` triple plus a
/// Feature node `ono:feature/<SYMBOL>_<CODE>`.
///
/// Output is in canonical order.
pub fn expand_record(record: &GeneRecord) -> Result<Vec<Triple>, OntologyError> {
    let errors = record.validate();
    if !errors.is_empty() {
        return Err(OntologyError::Validation(errors));
    }
    let gene = record.iri();
    let mut out = vec![
        triple(gene.clone(), terms::rdf_type(), terms::biomarker()),
        triple(gene.clone(), terms::has_citations(), Literal::integer(record.citations)),
    ];
    for gt in &record.gene_type {
        out.push(triple(gene.clone(), terms::gene_type(), gt.iri()));
    }
    for ev in &record.evidence_type {
        out.push(triple(gene.clone(), terms::evidence_type(), ev.iri()));
    }
    for r in &record.external_refs {
        out.push(triple(gene.clone(), terms::external_ref(), r.clone()));
    }
    let primary = record.primary_type();
    for code in &record.cross_responsibility {
        let cancer = code.iri();
        out.push(triple(gene.clone(), terms::cross_responsibility(), cancer.clone()));
        let f = feature_iri(&record.symbol, code.as_str());
        out.push(triple(f.clone(), terms::rdf_type(), terms::feature()));
        out.push(triple(f.clone(), terms::feature_of(), gene.clone()));
        out.push(triple(f.clone(), terms::in_cancer(), cancer));
        if let Some(level) = record.significance.get(code) {
            out.push(triple(f.clone(), terms::has_significance(), level.iri()));
        }
        if let Some(t) = primary {
            out.push(triple(f, terms::biomarker_type(), t.iri()));
        }
    }
    crate::rdf::sort_canonical(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{CancerCode, EvidenceSource, GeneType, Significance};
    use crate::rdf::Iri;

    fn tp53() -> GeneRecord {
        let code = |c| CancerCode::parse(c).unwrap();
        GeneRecord {
            symbol: "TP53".into(),
            gene_type: [GeneType::Potsf].into(),
            cross_responsibility: [code("BRCA"), code("OV"), code("PRAD"), code("MED")].into(),
            significance: [
                (code("BRCA"), Significance::High),
                (code("OV"), Significance::High),
                (code("PRAD"), Significance::Medium),
                (code("MED"), Significance::Low),
            ]
            .into(),
            evidence_type: EvidenceSource::ALL.into(),
            citations: 1500,
            external_refs: [Iri::new("https://www.ncbi.nlm.nih.gov/gene/7157").unwrap()].into(),
        }
    }

    #[test]
    fn feature_significance_present() {
        let triples = expand_record(&tp53()).unwrap();
        assert!(triples.contains(&Triple::ono("feature/TP53_BRCA", "hasSignificance", "HIGH")));
        assert!(triples.contains(&Triple::ono("feature/TP53_MED", "hasSignificance", "LOW")));
    }

    #[test]
    fn no_responsibility_means_no_features() {
        let mut rec = tp53();
        rec.cross_responsibility.clear();
        rec.significance.clear();
        let triples = expand_record(&rec).unwrap();
        let feature = terms::feature();
        assert!(!triples.iter().any(|t| t.object().as_iri() == Some(&feature)));
        // type, geneType, citations, 3 evidence, 1 external ref
        assert_eq!(triples.len(), 7);
    }

    #[test]
    fn deterministic() {
        assert_eq!(expand_record(&tp53()).unwrap(), expand_record(&tp53()).unwrap());
    }

    #[test]
    fn invalid_record_is_rejected() {
        let mut rec = tp53();
        rec.citations = 0;
        assert!(matches!(expand_record(&rec), Err(OntologyError::Validation(_))));
    }
}
