//! Parses a Turtle snippet and writes it back as canonical N-Triples.

use onconet::rdf::{parse_ntriples, parse_turtle_subset, serialize_ntriples};

const TURTLE: &str = r#"@prefix ono: <http://onconet.example/ono#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
ono:TP53 a ono:Biomarker ;
    ono:crossResponsibility ono:BRCA , ono:OV ;
    rdfs:label "tumor protein p53"@en .
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = parse_turtle_subset(TURTLE)?;
    let text = serialize_ntriples(&graph);
    print!("{text}");
    let back = parse_ntriples(&text)?;
    println!("# round trip preserved {} triples: {}", back.len(), back == graph);
    Ok(())
}
