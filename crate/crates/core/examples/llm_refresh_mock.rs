//! Refreshes the seed graph from a canned model response, without network
//! access, and prints the triage and the review queue.

use std::fs;
use std::path::Path;

use onconet::clock::Clock;
use onconet::extraction::Document;
use onconet::llm_refresh::{refresh_corpus, MockClient, RefreshConfig};
use onconet::ontology::{gazetteer, load_seed_with};
use onconet::reasoner::builtin_rules;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let clock = Clock::System;
    let mut graph = load_seed_with(data.join("seed"), &clock)?;
    let gz = gazetteer(&graph);
    let response = fs::read_to_string(data.join("fixtures/llm_response.txt"))?;
    let client = MockClient::new(response);
    let docs = [Document::new("note", fs::read_to_string(data.join("corpus/worked.txt"))?)];

    let outcome = refresh_corpus(&docs, &mut graph, &builtin_rules(), &gz, &client, &RefreshConfig::default(), &clock)?;
    for doc in &outcome.documents {
        let (new, confirmed, conflicting, invalid) = doc.diff.sizes();
        println!("{}: new={new} confirmed={confirmed} conflicting={conflicting} invalid={invalid}", doc.doc_id);
    }
    for entry in &outcome.audit.entries {
        println!("{:<16} {}", entry.verdict, entry.triple);
    }
    print!("{}", outcome.queue.render());
    Ok(())
}
