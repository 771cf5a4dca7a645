//! Ontology-guided prompt construction.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::ontology::terms;
use crate::rdf::{vocab, Graph, Iri, Term};

use super::RefreshError;

/// Instruction line shared by every prompt.
pub const INSTRUCTION: &str = "Extract triples from the text using only the relations listed below. \
Output one `subject|relation|object` per line and nothing else.";

/// Worked example shown to the model: a two-sentence paragraph and the
/// triples it states.
pub const WORKED_EXAMPLE_TEXT: &str = "TP53 is responsible for a disease called Breast Cancer. \
TP53 has POTSF functionality, which is mentioned in numerous PubMed articles.";
pub const WORKED_EXAMPLE_TRIPLES: [&str; 4] = [
    "TP53|causes|Breast Cancer",
    "TP53|hasType|POTSF",
    "Breast Cancer|isA|Disease",
    "POTSF|hasEvidence|PubMed",
];

const TRUNCATION_MARKER: &str = "... [roster truncated:";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PromptOptions {
    pub max_chars: usize,
    pub include_example: bool,
    /// Adds the asserted facts of genes named in the text.
    pub fact_digests: bool,
}

impl Default for PromptOptions {
    fn default() -> Self {
        PromptOptions {
            max_chars: 12_000,
            include_example: true,
            fact_digests: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContextExample {
    pub text: String,
    pub triples: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PromptInstance {
    pub instruction: String,
    /// Relation lines followed by the class roster.
    pub ontology_block: String,
    pub context_examples: Vec<ContextExample>,
    pub fact_digests: Vec<String>,
    pub target_text: String,
}

impl PromptInstance {
    pub fn render(&self) -> String {
        let mut out = format!("{}\n\n{}\n", self.instruction, self.ontology_block);
        if !self.fact_digests.is_empty() {
            out.push_str("\nKnown facts:\n");
            for d in &self.fact_digests {
                out.push_str(d);
                out.push('\n');
            }
        }
        for ex in &self.context_examples {
            out.push_str("\nExample text:\n");
            out.push_str(&ex.text);
            out.push_str("\nExample triples:\n");
            for t in &ex.triples {
                out.push_str(t);
                out.push('\n');
            }
        }
        out.push_str("\nText:\n");
        out.push_str(&self.target_text);
        out.push_str("\n\nTriples:\n");
        out
    }

    pub fn len(&self) -> usize {
        self.render().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_truncated(&self) -> bool {
        self.ontology_block.contains(TRUNCATION_MARKER)
    }
}

/// A relation the response parser accepts, with its declared domain and
/// range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationSpec {
    pub iri: Iri,
    pub name: String,
    pub domain: Option<Iri>,
    pub range: Option<Iri>,
}

/// Every `ono:` property declared as an object or datatype property,
/// ordered by name.
pub fn relation_roster(graph: &Graph) -> Vec<RelationSpec> {
    let mut props: BTreeSet<Iri> = BTreeSet::new();
    for kind in [terms::object_property(), Iri::new(vocab::OWL_DATATYPE_PROPERTY).expect("static IRI")] {
        props.extend(
            graph
                .subjects(&terms::rdf_type(), &Term::Iri(kind))
                .filter_map(|t| t.as_iri())
                .filter(|i| i.as_str().starts_with(vocab::ONO))
                .cloned(),
        );
    }
    let first = |p: &Iri, q: &Iri| {
        graph
            .objects(&Term::Iri(p.clone()), q)
            .filter_map(|o| o.as_iri().cloned())
            .min()
    };
    let mut out: Vec<RelationSpec> = props
        .into_iter()
        .map(|iri| RelationSpec {
            name: iri.local_name().to_owned(),
            domain: first(&iri, &terms::domain()),
            range: first(&iri, &terms::range()),
            iri,
        })
        .collect();
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

fn class_roster(graph: &Graph) -> Vec<String> {
    let classes: BTreeSet<Iri> = graph
        .subjects(&terms::rdf_type(), &Term::Iri(terms::owl_class()))
        .filter_map(|t| t.as_iri())
        .filter(|i| i.as_str().starts_with(vocab::ONO))
        .cloned()
        .collect();
    classes
        .into_iter()
        .map(|c| {
            let node = Term::Iri(c.clone());
            let label = graph.objects(&node, &terms::label()).filter_map(|l| l.as_literal()).map(|l| l.lexical()).min();
            let parent = graph.objects(&node, &terms::subclass_of()).filter_map(|o| o.as_iri()).min();
            let mut line = format!("- {}", c.local_name());
            if let Some(p) = parent {
                line.push_str(&format!(" (subclass of {})", p.local_name()));
            }
            if let Some(l) = label {
                line.push_str(&format!(": \"{l}\""));
            }
            line
        })
        .collect()
}

fn relation_lines(graph: &Graph) -> Vec<String> {
    relation_roster(graph)
        .into_iter()
        .map(|r| {
            let mut line = format!("- {}", r.name);
            let show = |i: &Option<Iri>| i.as_ref().map_or("any".to_owned(), |i| graph.compact(i));
            line.push_str(&format!(" (domain: {}, range: {})", show(&r.domain), show(&r.range)));
            line
        })
        .collect()
}

fn digests(graph: &Graph, text: &str) -> Vec<String> {
    let words: BTreeSet<&str> = text
        .split(|c: char| !(c.is_alphanumeric() || c == '-'))
        .filter(|w| !w.is_empty())
        .collect();
    let mut out = Vec::new();
    for gene in graph.instances_of(&terms::biomarker()) {
        let Some(iri) = gene.as_iri() else { continue };
        if !words.contains(iri.local_name()) {
            continue;
        }
        let facts: Vec<String> = graph
            .matching(Some(&gene), None, None)
            .into_iter()
            .filter(|t| t.predicate() != &terms::rdf_type())
            .map(|t| {
                let o = match t.object().as_iri() {
                    Some(o) => o.local_name().to_owned(),
                    None => t.object().as_literal().map_or_else(|| t.object().to_string(), |l| l.lexical().to_owned()),
                };
                format!("{}|{}|{}", iri.local_name(), t.predicate().local_name(), o)
            })
            .collect();
        out.extend(facts);
    }
    out
}

/// Builds the prompt for `text`. When the rendering exceeds
/// `options.max_chars`, the worked example is dropped first, then the fact
/// digests, then class roster lines from the end (with a marker). The
/// instruction, relation lines and target text are never cut.
pub fn render_prompt(graph: &Graph, text: &str, options: &PromptOptions) -> Result<PromptInstance, RefreshError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(RefreshError::EmptyText);
    }
    let relations = relation_lines(graph);
    let mut roster = class_roster(graph);
    let block = |roster: &[String], omitted: usize| {
        let mut b = String::from("Relations:\n");
        for r in &relations {
            b.push_str(r);
            b.push('\n');
        }
        b.push_str("Classes:");
        for c in roster {
            b.push('\n');
            b.push_str(c);
        }
        if omitted > 0 {
            b.push_str(&format!("\n{TRUNCATION_MARKER} {omitted} more classes]"));
        }
        b
    };
    let mut prompt = PromptInstance {
        instruction: INSTRUCTION.to_owned(),
        ontology_block: block(&roster, 0),
        context_examples: if options.include_example {
            vec![ContextExample {
                text: WORKED_EXAMPLE_TEXT.to_owned(),
                triples: WORKED_EXAMPLE_TRIPLES.iter().map(|s| s.to_string()).collect(),
            }]
        } else {
            Vec::new()
        },
        fact_digests: if options.fact_digests { digests(graph, text) } else { Vec::new() },
        target_text: text.to_owned(),
    };
    if prompt.len() > options.max_chars {
        prompt.context_examples.clear();
    }
    if prompt.len() > options.max_chars {
        prompt.fact_digests.clear();
    }
    let mut omitted = 0;
    while prompt.len() > options.max_chars && roster.pop().is_some() {
        omitted += 1;
        prompt.ontology_block = block(&roster, omitted);
    }
    Ok(prompt)
}
