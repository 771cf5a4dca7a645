//! Evaluates a class expression over a small fixture graph.

use std::fs;
use std::path::Path;

use onconet::clock::Clock;
use onconet::dlq::{evaluate, parse};
use onconet::rdf::parse_turtle_subset;
use onconet::reasoner::{builtin_rules, saturate};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixtures/dlq_fixture.ttl");
    let graph = parse_turtle_subset(&fs::read_to_string(path)?)?;
    let saturation = saturate(&graph, &builtin_rules(), &Clock::System);
    for query in [
        "Biomarker",
        "Biomarker and causes some BRCA",
        "Biomarker and causes some BRCA and isA only POTSF",
    ] {
        let expr = parse(query, saturation.graph.prefixes())?;
        println!("> {query}");
        print!("{}", evaluate(&expr, &saturation.graph).render(&saturation.graph));
    }
    Ok(())
}
