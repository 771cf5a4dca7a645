//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

pub mod dlq_oracle;

use std::collections::BTreeSet;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;

use onconet::clock::Clock;
use onconet::ontology::{load_seed_with, terms};
use onconet::rdf::{parse_ntriples, vocab, Graph, Iri, Literal, Provenance, Term, Triple};
use onconet::reasoner::{PatternTerm, Rule};

pub fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

pub fn clock() -> Clock {
    Clock::fixed("2024-01-01T00:00:00Z").unwrap()
}

pub fn seed() -> Graph {
    load_seed_with(data("seed"), &clock()).unwrap()
}

pub type Row = (String, String, String);

pub fn row(t: &Triple) -> Row {
    (t.subject().to_string(), t.predicate().to_string(), t.object().to_string())
}

pub fn rows<'a>(ts: impl IntoIterator<Item = &'a Triple>) -> BTreeSet<Row> {
    ts.into_iter().map(row).collect()
}

fn const_text(p: &PatternTerm) -> Option<String> {
    match p {
        PatternTerm::Const(t) => Some(t.to_string()),
        PatternTerm::Var(_) => None,
    }
}

/// Brute-force closure: repeatedly tries every rule on every combination
/// of facts until nothing changes. Works on N-Triples text only.
pub fn naive_closure(triples: &[Triple], rules: &[Rule]) -> BTreeSet<Row> {
    let mut facts = rows(triples);
    loop {
        let mut added = Vec::new();
        for rule in rules {
            let mut partial: Vec<Vec<(String, String)>> = vec![Vec::new()];
            for pat in &rule.body {
                let positions = [&pat.subject, &pat.predicate, &pat.object];
                let mut next = Vec::new();
                for b in &partial {
                    for f in &facts {
                        let values = [&f.0, &f.1, &f.2];
                        let mut nb = b.clone();
                        let ok = positions.iter().zip(values).all(|(p, v)| match p {
                            PatternTerm::Const(_) => const_text(p).as_ref() == Some(v),
                            PatternTerm::Var(name) => match nb.iter().find(|(n, _)| n == name) {
                                Some((_, bound)) => bound == v,
                                None => {
                                    nb.push((name.clone(), v.clone()));
                                    true
                                }
                            },
                        });
                        if ok {
                            next.push(nb);
                        }
                    }
                }
                partial = next;
            }
            for b in partial {
                let get = |p: &PatternTerm| match p {
                    PatternTerm::Const(_) => const_text(p).unwrap(),
                    PatternTerm::Var(n) => b.iter().find(|(k, _)| k == n).unwrap().1.clone(),
                };
                let head = (get(&rule.head.subject), get(&rule.head.predicate), get(&rule.head.object));
                let valid = !head.0.starts_with('"') && head.1.starts_with('<');
                if valid && !facts.contains(&head) {
                    added.push(head);
                }
            }
        }
        if added.is_empty() {
            return facts;
        }
        facts.extend(added);
    }
}

fn ono(local: &str) -> Iri {
    Iri::ono(local)
}

/// A random graph of at most `max` triples over a small vocabulary, with
/// subclass, subproperty, domain and range axioms plus instance data.
pub fn random_rdfs_graph(rng: &mut impl Rng, max: usize) -> Vec<Triple> {
    let classes: Vec<Iri> = (0..6).map(|i| ono(&format!("C{i}"))).collect();
    let props: Vec<Iri> = (0..4).map(|i| ono(&format!("p{i}"))).collect();
    let inds: Vec<Iri> = (0..8).map(|i| ono(&format!("i{i}"))).collect();
    let [ty, sub, subp, dom, ran] = [
        vocab::RDF_TYPE,
        vocab::RDFS_SUBCLASS_OF,
        vocab::RDFS_SUBPROPERTY_OF,
        vocab::RDFS_DOMAIN,
        vocab::RDFS_RANGE,
    ]
    .map(|i| Iri::new(i).unwrap());
    let n = rng.random_range(1..=max);
    let mut out = BTreeSet::new();
    for _ in 0..n {
        let pick = |rng: &mut dyn rand::RngCore, v: &[Iri]| v[rng.random_range(0..v.len())].clone();
        let t = match rng.random_range(0..10) {
            0 | 1 => Triple::new(pick(rng, &classes).into(), sub.clone(), pick(rng, &classes).into()),
            2 => Triple::new(pick(rng, &props).into(), subp.clone(), pick(rng, &props).into()),
            3 => Triple::new(pick(rng, &props).into(), dom.clone(), pick(rng, &classes).into()),
            4 => Triple::new(pick(rng, &props).into(), ran.clone(), pick(rng, &classes).into()),
            5 | 6 => Triple::new(pick(rng, &inds).into(), ty.clone(), pick(rng, &classes).into()),
            7 => Triple::new(
                pick(rng, &inds).into(),
                pick(rng, &props),
                Term::Literal(Literal::integer(rng.random_range(0..3))),
            ),
            _ => Triple::new(pick(rng, &inds).into(), pick(rng, &props), pick(rng, &inds).into()),
        }
        .unwrap();
        out.insert(t);
    }
    let mut v: Vec<Triple> = out.into_iter().collect();
    v.shuffle(rng);
    v
}

pub fn graph_of(triples: &[Triple]) -> Graph {
    let mut g = Graph::new();
    for t in triples {
        g.insert(t.clone(), None);
    }
    g
}

/// Genes listed as POTSF in the reference enumeration, with "WT" read as
/// WT1 and "DDX3×" as DDX3X.
pub const POTSF_ENUMERATION: &[&str] = &[
    "BRCA1", "CAMTA1", "CBFA2T3", "CDX2", "CREB3L1", "CREBBP", "DDB2", "DNMT1", "DNMT3A", "ETV6", "EZH2", "FOXA1",
    "FOXL2", "FOXO1", "FOXO3", "FOXO4", "FOXP1", "FUS", "IRF4", "KLF4", "KLF5", "NCOA4", "NOTCH1", "NOTCH2",
    "NOTCH3", "NPM1", "NR4A3", "PAX5", "PML", "PPARG", "RB1", "RUNX1", "SMAD4", "STAT3", "TCF3", "TCF7L2", "TP53",
    "TP63", "TRIM24", "WT1", "ZBTB16", "BCR", "CHEK2", "EPHA1", "EPHA3", "EPHB4", "FLT3", "MAP2K4", "MAP3K4",
    "MST1R", "NTRK3", "PRKAR1A", "PRKCB", "SYK", "ARHGEF12", "BCL10", "BRCA2", "CBL", "CDC73", "CDH11", "CDKN1B",
    "DCC", "DDX3X", "DICER1", "FAS", "FAT1", "GPC3", "IDH1", "IKZF2", "LIFR", "NF2", "NUP98", "PHF6", "PTPN1",
    "PTPN11", "RHOA", "RHOB", "SH2B3", "SLC9A3R1", "SOCS1", "SPOP", "SUZ12", "WHSC1L1",
];

const SOURCES: [&str; 5] = ["seed", "PubMed:1", "blog", "MeSH", "forum"];

/// Seed-vocabulary graph with partial biomarker records, external and
/// unregistered links, mixed provenance and ingestion duplicates.
pub fn random_quality_graph(rng: &mut impl Rng) -> Graph {
    let mut lines = String::new();
    let genes = rng.random_range(0..8);
    let mut triples = Vec::new();
    for i in 0..genes {
        let g = Term::ono(&format!("G{i}"));
        let mut push = |p: Iri, o: Term| triples.push(Triple::new(g.clone(), p, o).unwrap());
        push(terms::rdf_type(), Term::Iri(terms::biomarker()));
        if rng.random_bool(0.7) {
            push(terms::gene_type(), Term::ono("POTSF"));
        }
        if rng.random_bool(0.7) {
            push(terms::cross_responsibility(), Term::ono("BRCA"));
        }
        if rng.random_bool(0.7) {
            push(terms::evidence_type(), Term::ono("PubMed"));
        }
        if rng.random_bool(0.7) {
            push(terms::has_citations(), Term::Literal(Literal::integer(rng.random_range(0..3))));
        }
        if rng.random_bool(0.5) {
            push(terms::external_ref(), Term::iri(format!("{}{i}", vocab::ENTREZ)).unwrap());
        }
        if rng.random_bool(0.2) {
            push(terms::external_ref(), Term::iri(format!("http://unregistered.example/{i}")).unwrap());
        }
    }
    for t in &triples {
        lines.push_str(&t.to_ntriples());
        lines.push('\n');
        if rng.random_bool(0.2) {
            lines.push_str(&t.to_ntriples());
            lines.push('\n');
        }
    }
    let mut g = parse_ntriples(&lines).unwrap();
    let now = clock().now();
    for t in triples {
        if rng.random_bool(0.6) {
            let source = SOURCES[rng.random_range(0..SOURCES.len())];
            g.attach_provenance(&t, Provenance::new(source, "test", 1.0, now).unwrap());
        }
    }
    g
}

