//! Saturates the seed graph, checks consistency and explains one inferred
//! type assertion.

use std::path::Path;

use onconet::clock::Clock;
use onconet::ontology::load_seed_with;
use onconet::rdf::Triple;
use onconet::reasoner::{builtin_rules, check_consistency, explain, saturate, Constraints};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let clock = Clock::System;
    let mut graph = load_seed_with(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/seed"), &clock)?;
    graph.insert(Triple::ono("TP53", "hasType", "POTSF"), None);

    let saturation = saturate(&graph, &builtin_rules(), &clock);
    println!("asserted {} inferred {}", graph.len(), saturation.inferred.len());

    let violations = check_consistency(&saturation.graph, &Constraints::from_graph(&saturation.graph));
    println!("violations: {}", violations.len());

    let goal = Triple::new(
        onconet::rdf::Term::ono("TP53"),
        onconet::ontology::terms::rdf_type(),
        onconet::rdf::Term::ono("BiomarkerType"),
    )?;
    print!("{}", explain(&saturation, &goal)?.render(&saturation.graph));
    Ok(())
}
