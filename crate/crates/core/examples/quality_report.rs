//! Scores the seed graph on the quality dimensions and prints the table.

use std::path::Path;

use onconet::clock::Clock;
use onconet::ontology::load_seed_with;
use onconet::quality::{assess, QualityConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let clock = Clock::System;
    let graph = load_seed_with(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/seed"), &clock)?;
    let report = assess(&graph, &QualityConfig::default(), &clock);
    print!("{}", report.render_table());
    Ok(())
}
