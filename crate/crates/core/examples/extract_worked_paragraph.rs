//! Runs the extraction pipeline over one paragraph and emits the new
//! triples into the seed graph.

use std::fs;
use std::path::Path;

use onconet::clock::Clock;
use onconet::extraction::{emit_outcomes, Document, Pipeline};
use onconet::ontology::{gazetteer, load_seed_with};

const PARAGRAPH: &str = "TP53 is responsible for a disease called Breast Cancer. \
TP53 has POTSF functionality, which is mentioned in numerous PubMed articles.";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let clock = Clock::System;
    let mut graph = load_seed_with(data.join("seed"), &clock)?;
    let mut gz = gazetteer(&graph);
    gz.load_aliases(&fs::read_to_string(data.join("aliases.tsv"))?, &graph)?;

    let outcome = Pipeline::new(&graph, &gz).process(&Document::new("paragraph", PARAGRAPH))?;
    for entity in &outcome.entities {
        println!(
            "{:<14} {:<15} {}",
            entity.mention.surface,
            entity.category.to_string(),
            entity.normalized_id.as_deref().unwrap_or("-")
        );
    }
    for c in &outcome.candidates {
        println!("{}  [{:.2}]  {}", c.relation, c.score, c.anonymized_sentence);
    }
    let report = emit_outcomes(&[outcome], &mut graph, &clock);
    for t in &report.emitted.inserted {
        println!("{t}");
    }
    println!("inserted {} triples; graph now has {}", report.emitted.inserted.len(), graph.len());
    Ok(())
}
