//! Seed loading: parse the seed files, read gene records in compact or
//! expanded form, validate them and expand them into the graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use crate::clock::Clock;
use crate::rdf::{parse_ntriples, parse_turtle_subset, Graph, Iri, Provenance, Term};

use super::model::{code_of, is_valid_symbol, CancerCode, CancerType, EvidenceSource, Feature, GeneRecord, GeneType, Significance};
use super::terms;
use super::{expand_record, OntologyError, RecordError};

/// Loads a seed file, or every `.ttl`/`.nt` file in a directory (in file
/// name order), validates it and returns the expanded graph. All triples
/// carry `seed` provenance stamped with the system clock.
pub fn load_seed(path: impl AsRef<Path>) -> Result<Graph, OntologyError> {
    load_seed_with(path, &Clock::System)
}

pub fn load_seed_with(path: impl AsRef<Path>, clock: &Clock) -> Result<Graph, OntologyError> {
    let raw = read_seed_files(path.as_ref())?;
    seed_graph(raw, clock)
}

fn seed_files(path: &Path) -> Result<Vec<PathBuf>, OntologyError> {
    let io_err = |source| OntologyError::Io {
        path: path.to_path_buf(),
        source,
    };
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(path)
        .map_err(io_err)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("ttl" | "nt")))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(OntologyError::NoSeedFiles(path.to_path_buf()));
    }
    Ok(files)
}

fn read_seed_files(path: &Path) -> Result<Graph, OntologyError> {
    let mut graph = Graph::new();
    for file in seed_files(path)? {
        let text = fs::read_to_string(&file).map_err(|source| OntologyError::Io {
            path: file.clone(),
            source,
        })?;
        let parsed = if file.extension().is_some_and(|e| e == "nt") {
            parse_ntriples(&text)
        } else {
            parse_turtle_subset(&text)
        }
        .map_err(|source| OntologyError::Parse {
            path: file.clone(),
            source,
        })?;
        for (label, ns) in parsed.prefixes() {
            // Conflicting rebinding across seed files is a data error.
            graph.add_prefix(label, ns).map_err(|source| OntologyError::Parse {
                path: file.clone(),
                source,
            })?;
        }
        graph.extend_from(&parsed);
    }
    Ok(graph)
}

/// Validates and expands an already parsed seed graph. Compact record
/// predicates (`highIn`, `mediumIn`, `lowIn`) are replaced by their
/// expansion; everything else is kept.
pub fn seed_graph(raw: Graph, clock: &Clock) -> Result<Graph, OntologyError> {
    let mut errors = validate_cancers(&raw);
    let records = match gene_records(&raw) {
        Ok(r) => r,
        Err(mut e) => {
            errors.append(&mut e);
            Vec::new()
        }
    };
    for rec in &records {
        errors.extend(rec.validate());
    }
    if !errors.is_empty() {
        return Err(OntologyError::Validation(errors));
    }

    let compact = [terms::high_in(), terms::medium_in(), terms::low_in()];
    let stamp = Provenance::new("seed", "seed", 1.0, clock.now()).expect("confidence 1.0 is valid");
    let mut graph = Graph::new();
    for (label, ns) in raw.prefixes() {
        graph.add_prefix(label, ns).expect("prefixes were consistent in the raw graph");
    }
    for t in raw.triples() {
        if !compact.contains(t.predicate()) {
            graph.insert(t, Some(stamp.clone()));
        }
    }
    for rec in &records {
        for t in expand_record(rec)? {
            graph.insert(t, Some(stamp.clone()));
        }
    }
    Ok(graph)
}

fn validate_cancers(graph: &Graph) -> Vec<RecordError> {
    let flag = terms::non_tcga();
    let mut errors = Vec::new();
    for term in graph.instances_of(&terms::cancer()) {
        let Some(iri) = term.as_iri() else {
            errors.push(RecordError::new(None, format!("blank Cancer instance {term}")));
            continue;
        };
        match code_of(&term) {
            None => errors.push(RecordError::new(Some(iri.clone()), "unknown cancer code")),
            Some(code) if !code.is_tcga() => {
                let flagged = graph
                    .objects(&term, &flag)
                    .any(|o| o.as_literal().is_some_and(|l| l.lexical() == "true"));
                if !flagged {
                    errors.push(RecordError::new(
                        Some(iri.clone()),
                        format!("non-TCGA code {code} must carry ono:nonTcga true"),
                    ));
                }
            }
            Some(_) => {}
        }
    }
    errors
}

fn iri_objects(graph: &Graph, s: &Term, p: &Iri) -> Vec<Term> {
    let mut v: Vec<Term> = graph.objects(s, p).cloned().collect();
    v.sort_by_cached_key(Term::to_ntriples);
    v
}

/// Reads every asserted `ono:Biomarker` instance into a record. Accepts the
/// compact seed form and the expanded form (Feature nodes) alike.
pub fn gene_records(graph: &Graph) -> Result<Vec<GeneRecord>, Vec<RecordError>> {
    let mut errors = Vec::new();
    let mut records = Vec::new();
    let features = features_by_gene(graph, &mut errors);
    for gene in graph.instances_of(&terms::biomarker()) {
        let Some(iri) = gene.as_iri().cloned() else {
            errors.push(RecordError::new(None, format!("blank Biomarker instance {gene}")));
            continue;
        };
        let Some(symbol) = iri.as_str().strip_prefix(crate::rdf::vocab::ONO).map(str::to_owned) else {
            errors.push(RecordError::new(Some(iri), "Biomarker outside the ono namespace"));
            continue;
        };
        if !is_valid_symbol(&symbol) {
            errors.push(RecordError::new(Some(iri), format!("invalid gene symbol {symbol:?}")));
            continue;
        }
        let mut rec = GeneRecord {
            symbol,
            ..Default::default()
        };
        let subject = Some(iri.clone());

        for t in iri_objects(graph, &gene, &terms::gene_type()) {
            match t.as_iri().and_then(|i| GeneType::parse(i.local_name())) {
                Some(gt) => {
                    rec.gene_type.insert(gt);
                }
                None => errors.push(RecordError::new(subject.clone(), format!("unknown gene type {t}"))),
            }
        }

        let add_code = |rec: &mut GeneRecord, t: &Term, level: Option<Significance>, errors: &mut Vec<RecordError>| {
            let Some(code) = code_of(t) else {
                errors.push(RecordError::new(subject.clone(), format!("unknown cancer code {t}")));
                return;
            };
            rec.cross_responsibility.insert(code.clone());
            if let Some(level) = level {
                if let Some(prev) = rec.significance.insert(code.clone(), level) {
                    if prev != level {
                        errors.push(RecordError::new(
                            subject.clone(),
                            format!("conflicting significance for {code}: {} and {}", prev.local_name(), level.local_name()),
                        ));
                    }
                }
            }
        };
        for t in iri_objects(graph, &gene, &terms::cross_responsibility()) {
            add_code(&mut rec, &t, None, &mut errors);
        }
        for (pred, level) in [
            (terms::high_in(), Significance::High),
            (terms::medium_in(), Significance::Medium),
            (terms::low_in(), Significance::Low),
        ] {
            for t in iri_objects(graph, &gene, &pred) {
                add_code(&mut rec, &t, Some(level), &mut errors);
            }
        }
        if let Some(linked) = features.get(&iri) {
            for (cancer, level) in linked {
                add_code(&mut rec, cancer, *level, &mut errors);
            }
        }

        for t in iri_objects(graph, &gene, &terms::evidence_type()) {
            match t.as_iri().and_then(EvidenceSource::from_iri) {
                Some(ev) => {
                    rec.evidence_type.insert(ev);
                }
                None => errors.push(RecordError::new(subject.clone(), format!("unknown evidence source {t}"))),
            }
        }

        let citations: Vec<Term> = iri_objects(graph, &gene, &terms::has_citations());
        match citations.as_slice() {
            [] => rec.citations = 0,
            [one] => match one.as_literal().and_then(|l| l.as_integer()) {
                Some(n) => rec.citations = n,
                None => errors.push(RecordError::new(subject.clone(), format!("hasCitations is not an integer: {one}"))),
            },
            _ => errors.push(RecordError::new(subject.clone(), "more than one hasCitations value")),
        }

        for t in iri_objects(graph, &gene, &terms::external_ref()) {
            match t.as_iri() {
                Some(r) => {
                    rec.external_refs.insert(r.clone());
                }
                None => errors.push(RecordError::new(subject.clone(), format!("externalRef must be an IRI: {t}"))),
            }
        }
        records.push(rec);
    }
    if errors.is_empty() {
        Ok(records)
    } else {
        Err(errors)
    }
}

type FeatureLinks = BTreeMap<Iri, Vec<(Term, Option<Significance>)>>;

fn features_by_gene(graph: &Graph, errors: &mut Vec<RecordError>) -> FeatureLinks {
    let mut out: FeatureLinks = BTreeMap::new();
    for f in graph.instances_of(&terms::feature()) {
        let genes: Vec<Term> = iri_objects(graph, &f, &terms::feature_of());
        let cancers: Vec<Term> = iri_objects(graph, &f, &terms::in_cancer());
        let levels: Vec<Term> = iri_objects(graph, &f, &terms::has_significance());
        let subject = f.as_iri().cloned();
        let ([gene], [cancer]) = (genes.as_slice(), cancers.as_slice()) else {
            errors.push(RecordError::new(subject, "Feature needs exactly one featureOf and one inCancer"));
            continue;
        };
        let level = match levels.as_slice() {
            [] => None,
            [one] => match one.as_iri().and_then(Significance::from_iri) {
                Some(l) => Some(l),
                None => {
                    errors.push(RecordError::new(subject, format!("unknown significance {one}")));
                    continue;
                }
            },
            _ => {
                errors.push(RecordError::new(subject, "Feature has more than one significance"));
                continue;
            }
        };
        if let Some(g) = gene.as_iri() {
            out.entry(g.clone()).or_default().push((cancer.clone(), level));
        }
    }
    out
}

/// Cancer instances of the graph in code order.
pub fn cancer_types(graph: &Graph) -> Vec<CancerType> {
    let label = terms::label();
    let mut out: Vec<CancerType> = graph
        .instances_of(&terms::cancer())
        .iter()
        .filter_map(|term| {
            let code = code_of(term)?;
            let label_text = graph
                .objects(term, &label)
                .filter_map(|o| o.as_literal().map(|l| l.lexical().to_owned()))
                .min()
                .unwrap_or_else(|| code.label().to_owned());
            let external_refs = graph
                .objects(term, &terms::external_ref())
                .filter_map(|o| o.as_iri().cloned())
                .collect();
            Some(CancerType {
                code,
                label: label_text,
                external_refs,
            })
        })
        .collect();
    out.sort_by(|a, b| a.code.cmp(&b.code));
    out
}

/// Feature nodes with all parts present, in IRI order.
pub fn features(graph: &Graph) -> Vec<Feature> {
    let mut out = Vec::new();
    for f in graph.instances_of(&terms::feature()) {
        let one = |p: Iri| -> Option<Iri> {
            let v: Vec<&Term> = graph.objects(&f, &p).collect();
            match v.as_slice() {
                [t] => t.as_iri().cloned(),
                _ => None,
            }
        };
        let (Some(gene), Some(cancer), Some(sig), Some(bt)) = (
            one(terms::feature_of()),
            one(terms::in_cancer()),
            one(terms::has_significance()),
            one(terms::biomarker_type()),
        ) else {
            continue;
        };
        let (Some(significance), Some(biomarker_type)) = (Significance::from_iri(&sig), GeneType::parse(bt.local_name()))
        else {
            continue;
        };
        let evidence: BTreeSet<EvidenceSource> = graph
            .objects(&Term::Iri(gene.clone()), &terms::evidence_type())
            .filter_map(|o| o.as_iri().and_then(EvidenceSource::from_iri))
            .collect();
        out.push(Feature {
            gene,
            cancer,
            significance,
            biomarker_type,
            evidence,
        });
    }
    out
}

/// `class` and every class below it through asserted `rdfs:subClassOf`.
pub fn subclasses_of(graph: &Graph, class: &Iri) -> BTreeSet<Iri> {
    let sub = terms::subclass_of();
    let mut seen = BTreeSet::from([class.clone()]);
    let mut stack = vec![class.clone()];
    while let Some(c) = stack.pop() {
        for s in graph.subjects(&sub, &Term::Iri(c)) {
            if let Some(i) = s.as_iri() {
                if seen.insert(i.clone()) {
                    stack.push(i.clone());
                }
            }
        }
    }
    seen
}

/// Number of TCGA cancer instances and of flagged extension instances.
pub fn cancer_counts(graph: &Graph) -> (usize, usize) {
    let codes: Vec<CancerCode> = cancer_types(graph).into_iter().map(|c| c.code).collect();
    let tcga = codes.iter().filter(|c| c.is_tcga()).count();
    (tcga, codes.len() - tcga)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{parse_turtle_subset, Triple};

    const HEADER: &str = "@prefix ono: <http://onconet.example/ono#> .\n";

    fn seed_from(text: &str) -> Result<Graph, OntologyError> {
        seed_graph(parse_turtle_subset(&format!("{HEADER}{text}")).unwrap(), &Clock::System)
    }

    #[test]
    fn zero_citations_is_reported_with_subject() {
        let err = seed_from(
            "ono:BRCA a ono:Cancer .\n\
             ono:G1 a ono:Biomarker ; ono:geneType ono:Oncogene ; ono:highIn ono:BRCA ;\n\
             ono:evidenceType ono:PubMed ; ono:hasCitations 0 .",
        )
        .unwrap_err();
        let OntologyError::Validation(errs) = err else { panic!("{err}") };
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].subject, Some(Iri::ono("G1")));
        assert!(errs[0].reason.contains("hasCitations"));
    }

    #[test]
    fn unknown_code_is_reported() {
        let err = seed_from(
            "ono:G1 a ono:Biomarker ; ono:geneType ono:Oncogene ; ono:highIn ono:XYZ ;\n\
             ono:evidenceType ono:PubMed ; ono:hasCitations 2 .",
        )
        .unwrap_err();
        assert!(err.to_string().contains("unknown cancer code"), "{err}");
    }

    #[test]
    fn unflagged_extension_code_is_rejected() {
        let err = seed_from("ono:MED a ono:Cancer .").unwrap_err();
        assert!(err.to_string().contains("nonTcga"), "{err}");
        assert!(seed_from("ono:MED a ono:Cancer ; ono:nonTcga true .").is_ok());
    }

    #[test]
    fn compact_form_is_expanded_and_reload_is_stable() {
        let g = seed_from(
            "ono:BRCA a ono:Cancer .\n\
             ono:G1 a ono:Biomarker ; ono:geneType ono:POTFS ; ono:highIn ono:BRCA ;\n\
             ono:evidenceType ono:PubMed ; ono:hasCitations 2 .",
        )
        .unwrap();
        assert!(g.contains(&Triple::ono("G1", "crossResponsibility", "BRCA")));
        assert!(g.contains(&Triple::ono("feature/G1_BRCA", "hasSignificance", "HIGH")));
        assert!(g.contains(&Triple::ono("G1", "geneType", "POTSF")));
        assert!(!g.iter().any(|t| t.predicate() == &terms::high_in()));
        let again = seed_graph(g.clone(), &Clock::System).unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn subclass_walk() {
        let g = parse_turtle_subset(&format!(
            "{HEADER}@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n\
             ono:B rdfs:subClassOf ono:A . ono:C rdfs:subClassOf ono:B . ono:D rdfs:subClassOf ono:X ."
        ))
        .unwrap();
        let subs = subclasses_of(&g, &Iri::ono("A"));
        assert_eq!(subs, [Iri::ono("A"), Iri::ono("B"), Iri::ono("C")].into());
    }
}
