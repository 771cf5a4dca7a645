use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

use onconet::clock::Clock;
use onconet::extraction::{
    extract_corpus, load_corpus, Document, ExternalExtractor, ExtractionError, ExtractorRequest, Pipeline,
    Relation, DEFAULT_THETA_LINK,
};
use onconet::ontology::{gazetteer, load_seed_with, Gazetteer};
use onconet::rdf::{Graph, Triple};

const WORKED: &str = "TP53 is responsible for a disease called Breast Cancer. \
TP53 has POTSF functionality, which is mentioned in numerous PubMed articles.";

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

fn clock() -> Clock {
    Clock::fixed("2024-01-01T00:00:00Z").unwrap()
}

fn seed() -> (Graph, Gazetteer) {
    let g = load_seed_with(data("seed"), &clock()).unwrap();
    let mut gz = gazetteer(&g);
    gz.load_aliases(&fs::read_to_string(data("aliases.tsv")).unwrap(), &g).unwrap();
    (g, gz)
}

fn expected() -> BTreeSet<Triple> {
    [
        Triple::ono("TP53", "causes", "BRCA"),
        Triple::ono("TP53", "hasType", "POTSF"),
        Triple::ono("BRCA", "isA", "Disease"),
        Triple::ono("POTSF", "hasEvidence", "PubMed"),
    ]
    .into()
}

#[test]
fn worked_paragraph_yields_four_triples() {
    let (mut g, gz) = seed();
    for t in expected() {
        assert!(!g.contains(&t), "{t} already in the seed");
    }
    let before = g.len();
    let docs = [Document::new("worked", WORKED)];
    let report = extract_corpus(&docs, &mut g, &gz, DEFAULT_THETA_LINK, &clock()).unwrap();
    let inserted: BTreeSet<Triple> = report.emitted.inserted.iter().cloned().collect();
    assert_eq!(inserted, expected());
    assert_eq!(g.len(), before + 4);
    for t in expected() {
        let prov = g.provenance(&t).expect("provenance recorded");
        assert_eq!(prov.source, "worked");
    }

    let again = extract_corpus(&docs, &mut g, &gz, DEFAULT_THETA_LINK, &clock()).unwrap();
    assert!(again.emitted.inserted.is_empty());
    assert_eq!(g.len(), before + 4);
}

#[test]
fn worked_paragraph_anonymisation() {
    let (g, gz) = seed();
    let outcome = Pipeline::new(&g, &gz).process(&Document::new("worked", WORKED)).unwrap();
    let causes = outcome.candidates.iter().find(|c| c.relation == Relation::Causes).unwrap();
    assert_eq!(causes.anonymized_sentence, "@GENE$ is responsible for a disease called @DISEASE$.");
    let entity_ids: Vec<_> = outcome.entities.iter().filter_map(|e| e.normalized_id.as_deref()).collect();
    assert!(entity_ids.contains(&"Entrez:7157"));
}

struct Garbage;

impl ExternalExtractor for Garbage {
    fn id(&self) -> &str {
        "garbage"
    }
    fn call(&self, _: &ExtractorRequest) -> Result<String, ExtractionError> {
        Ok("{\"mentions\": [{\"sentence_index\": 9}]}".into())
    }
}

#[test]
fn malformed_external_response_falls_back() {
    let (g, gz) = seed();
    let outcome = Pipeline::new(&g, &gz)
        .with_external(Box::new(Garbage))
        .process(&Document::new("worked", WORKED))
        .unwrap();
    assert_eq!(outcome.extractor, "lexicon");
    assert_eq!(outcome.warnings.len(), 1);
    assert_eq!(outcome.candidates.len(), 4);
}

#[test]
fn corpus_order_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for (name, body) in [("b", WORKED), ("a", "TP53 causes Breast Cancer."), ("notes", "ignored")] {
        let ext = if name == "notes" { "md" } else { "txt" };
        fs::write(dir.path().join(format!("{name}.{ext}")), body).unwrap();
    }
    let docs = load_corpus(dir.path()).unwrap();
    assert_eq!(docs.iter().map(|d| d.id.as_str()).collect::<Vec<_>>(), ["a", "b"]);
    let (g, gz) = seed();
    let reversed: Vec<Document> = docs.iter().rev().cloned().collect();
    let p = Pipeline::new(&g, &gz);
    let x = serde_json::to_string(&p.process_all(&docs).unwrap()).unwrap();
    let y = serde_json::to_string(&p.process_all(&reversed).unwrap()).unwrap();
    assert_eq!(x, y);
}

#[test]
fn duplicate_document_ids_rejected() {
    let (g, gz) = seed();
    let docs = [Document::new("x", "a"), Document::new("x", "b")];
    assert!(matches!(
        Pipeline::new(&g, &gz).process_all(&docs),
        Err(ExtractionError::DuplicateDocument(_))
    ));
}
