use std::collections::BTreeSet;
use std::path::PathBuf;

use onconet::rdf::{
    parse_ntriples, parse_ntriples_with, parse_turtle_subset, serialize_ntriples, vocab, Iri, Literal, ParseMode, Term,
    Triple,
};

fn data(rel: &str) -> String {
    std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)).unwrap()
}

fn i(text: &str) -> Term {
    Term::iri(text).unwrap()
}

fn o(local: &str) -> Term {
    Term::ono(local)
}

fn b(label: &str) -> Term {
    Term::blank(label).unwrap()
}

fn s(text: &str) -> Term {
    Term::Literal(Literal::string(text))
}

fn typed(text: &str, dt: &str) -> Term {
    Term::Literal(Literal::typed(text, Iri::new(dt).unwrap()))
}

fn lang(text: &str, tag: &str) -> Term {
    Term::Literal(Literal::lang_string(text, tag).unwrap())
}

fn t(subject: Term, predicate: &str, object: Term) -> Triple {
    Triple::new(subject, Iri::new(predicate).unwrap(), object).unwrap()
}

fn ono_p(local: &str) -> String {
    vocab::ono(local)
}

/// The fixture's triples, written out by hand.
fn expected_fixture() -> BTreeSet<Triple> {
    let ty = vocab::RDF_TYPE;
    let label = vocab::RDFS_LABEL;
    let alt = vocab::SKOS_ALT_LABEL;
    let text = "http://example.org/text";
    let doc = || i("http://example.org/doc/1");
    let ex_s = || i("http://example.org/s");
    let ex_p = "http://example.org/p";
    let f = || o("feature/TP53_BRCA");
    [
        t(o("TP53"), ty, o("Biomarker")),
        t(o("TP53"), &ono_p("geneType"), o("POTSF")),
        t(o("TP53"), &ono_p("crossResponsibility"), o("BRCA")),
        t(o("TP53"), &ono_p("crossResponsibility"), o("OV")),
        t(o("TP53"), &ono_p("crossResponsibility"), o("PRAD")),
        t(o("TP53"), &ono_p("crossResponsibility"), o("MED")),
        t(o("TP53"), &ono_p("hasCitations"), typed("1500", vocab::XSD_INTEGER)),
        t(o("TP53"), &ono_p("externalRef"), i("https://www.ncbi.nlm.nih.gov/gene/7157")),
        t(o("TP53"), label, s("tumor protein p53")),
        t(o("TP53"), alt, lang("p53", "en")),
        t(f(), ty, o("Feature")),
        t(f(), &ono_p("featureOf"), o("TP53")),
        t(f(), &ono_p("inCancer"), o("BRCA")),
        t(f(), &ono_p("hasSignificance"), o("HIGH")),
        t(f(), &ono_p("biomarkerType"), o("POTSF")),
        t(o("BRCA"), ty, o("Cancer")),
        t(o("BRCA"), label, s("Breast invasive carcinoma")),
        t(o("BRCA"), alt, s("breast cancer")),
        t(o("BRCA"), alt, lang("cancer du sein", "fr")),
        t(o("BRCA"), &ono_p("externalRef"), i("http://purl.obolibrary.org/obo/DOID_1612")),
        t(o("OV"), label, s("Ovarian serous cystadenocarcinoma")),
        t(o("MED"), &ono_p("nonTcga"), typed("true", vocab::XSD_BOOLEAN)),
        t(doc(), text, s("line one\nline two")),
        t(doc(), text, s("tab\there")),
        t(doc(), text, s("say \"hi\"")),
        t(doc(), text, s("back\\slash")),
        t(doc(), text, s("café")),
        t(doc(), text, s("emoji \u{1F600}")),
        t(doc(), text, s("")),
        t(doc(), "http://example.org/score", typed("0.75", vocab::XSD_DECIMAL)),
        t(doc(), text, s("carriage\rreturn")),
        t(b("b0"), &ono_p("hasGOAssociation"), b("go1")),
        t(b("go1"), ty, i("http://purl.obolibrary.org/obo/GO_0000060")),
        t(b("b0"), label, s("anonymous gene")),
        t(b("b0"), ex_p, b("b0")),
        t(ex_s(), ex_p, i("http://example.org/o")),
        t(ex_s(), ex_p, s("o")),
        t(ex_s(), ex_p, lang("o", "en")),
        t(ex_s(), ex_p, lang("o", "en-GB")),
        t(ex_s(), ex_p, typed("o", "http://example.org/dt")),
        t(ex_s(), ex_p, i("http://example.org/o#frag")),
        t(i("urn:isbn:0451450523"), ex_p, i("mailto:someone@example.org")),
        t(i("http://example.org/é"), ex_p, i("http://example.org/o")),
    ]
    .into_iter()
    .collect()
}

#[test]
fn fifty_line_fixture_matches_hand_built_set() {
    let text = data("fixtures/fifty_lines.nt");
    assert_eq!(text.lines().count(), 50);
    let g = parse_ntriples(&text).unwrap();
    let got: BTreeSet<Triple> = g.iter().collect();
    assert_eq!(got, expected_fixture());
    // One statement is repeated with different whitespace.
    assert_eq!(g.ingest_stats().statements, 44);
    assert_eq!(g.ingest_stats().duplicates, 1);
}

#[test]
fn fixture_round_trips() {
    let g = parse_ntriples(&data("fixtures/fifty_lines.nt")).unwrap();
    let out = serialize_ntriples(&g);
    let back = parse_ntriples(&out).unwrap();
    assert_eq!(back, g);
    assert_eq!(serialize_ntriples(&back), out);
}

#[test]
fn turtle_seed_schema_equals_ntriples_twin() {
    // The twin was produced by an independent RDF library.
    let ttl = parse_turtle_subset(&data("seed/schema.ttl")).unwrap();
    let nt = parse_ntriples(&data("fixtures/schema_twin.nt")).unwrap();
    assert_eq!(ttl.len(), nt.len());
    assert_eq!(ttl, nt);
}

#[test]
fn lenient_mode_reports_each_bad_line() {
    let mut text = data("fixtures/fifty_lines.nt");
    text.push_str("<http://a> <http://b> .\n\"x\" <http://b> <http://c> .\n");
    assert!(parse_ntriples(&text).is_err());
    let parsed = parse_ntriples_with(&text, ParseMode::Lenient).unwrap();
    assert_eq!(parsed.graph.len(), 43);
    let lines: Vec<usize> = parsed.issues.iter().map(|i| i.line).collect();
    assert_eq!(lines, vec![51, 52]);
}

#[test]
fn match_patterns_against_linear_scan() {
    let g = parse_ntriples(&data("fixtures/fifty_lines.nt")).unwrap();
    let all = g.triples();
    let cr = Iri::ono("crossResponsibility");
    let tp53 = o("TP53");
    let brca = o("BRCA");
    let patterns: Vec<(Option<&Term>, Option<&Iri>, Option<&Term>)> = vec![
        (Some(&tp53), None, None),
        (None, Some(&cr), None),
        (None, None, Some(&brca)),
        (Some(&tp53), Some(&cr), None),
        (None, Some(&cr), Some(&brca)),
        (Some(&tp53), None, Some(&brca)),
        (Some(&tp53), Some(&cr), Some(&brca)),
        (None, None, None),
    ];
    for (ps, pp, po) in patterns {
        let scan: Vec<Triple> = all
            .iter()
            .filter(|t| ps.is_none_or(|x| t.subject() == x))
            .filter(|t| pp.is_none_or(|x| t.predicate() == x))
            .filter(|t| po.is_none_or(|x| t.object() == x))
            .cloned()
            .collect();
        assert_eq!(g.matching(ps, pp, po), scan);
    }
}
