//! Loads the bundled seed ontology and prints a short summary.
//!
//! Run with `cargo run --example build_seed_kg`.

use std::path::Path;

use onconet::clock::Clock;
use onconet::ontology::{cancer_counts, gene_records, load_seed_with};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/seed");
    let graph = load_seed_with(seed, &Clock::System)?;
    let (tcga, flagged) = cancer_counts(&graph);
    println!("triples: {}", graph.len());
    println!("cancer types: {tcga} TCGA, {flagged} flagged");
    let records = gene_records(&graph).map_err(|e| format!("{e:?}"))?;
    for rec in records.iter().take(5) {
        println!(
            "{:<8} responsible for {:?}, {} citations",
            rec.symbol,
            rec.cross_responsibility.iter().map(|c| c.as_str()).collect::<Vec<_>>(),
            rec.citations
        );
    }
    println!("... {} biomarkers in total", records.len());
    Ok(())
}
