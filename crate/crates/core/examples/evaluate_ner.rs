//! Scores entity predictions against gold spans by exact match.

use std::fs;
use std::path::Path;

use onconet::extraction::{evaluate_exact_match, GoldCorpus};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixtures");
    let gold = GoldCorpus::from_tsv(&fs::read_to_string(fixtures.join("ner_gold.tsv"))?)?;
    let predicted = GoldCorpus::from_tsv(&fs::read_to_string(fixtures.join("ner_predicted.tsv"))?)?;
    let report = evaluate_exact_match(&gold, &predicted.annotations)?;
    let row = |name: &str, s: &onconet::extraction::Score| {
        println!(
            "{name:<16} tp={} fp={} fn={} P={:.3} R={:.3} F1={:.3}",
            s.tp, s.fp, s.fn_, s.precision, s.recall, s.f1
        )
    };
    for (category, score) in &report.per_category {
        row(&category.to_string(), score);
    }
    row("overall", &report.overall);
    Ok(())
}
