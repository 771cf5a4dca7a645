//! Line-oriented interactive query loop.

use std::io::{self, BufRead, Write};

use crate::ontology::terms;
use crate::rdf::{Term, Triple};
use crate::reasoner::{explain, Saturation};

use super::eval::evaluate;
use super::parse::{parse, resolve, ClassExpression};

const HELP: &str = "queries: NAME, NAME some NAME, NAME only NAME, NAME value NAME, joined by `and`\n\
commands: :explain <name>  :help  :quit";

/// Reads one query or command per line from `input` and writes answers to
/// `out`. Parse errors are reported and the loop continues; `:quit` or end
/// of input ends it.
pub fn repl<R: BufRead, W: Write>(saturation: &Saturation, input: R, mut out: W) -> io::Result<()> {
    let graph = &saturation.graph;
    let mut last: Option<ClassExpression> = None;
    for line in input.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line == ":quit" || line == ":q" {
            break;
        }
        if line == ":help" {
            writeln!(out, "{HELP}")?;
            continue;
        }
        if let Some(rest) = line.strip_prefix(":explain") {
            let name = rest.trim();
            match resolve(name, 10, graph.prefixes()) {
                Ok(_) if name.is_empty() => writeln!(out, "error: usage :explain <name>")?,
                Err(e) => writeln!(out, "error: {e}")?,
                Ok(iri) => {
                    let x = Term::Iri(iri.clone());
                    let types: Vec<Triple> = match &last {
                        Some(expr) => expr
                            .conjuncts()
                            .iter()
                            .filter_map(|c| match c {
                                ClassExpression::Atom { class } => {
                                    Triple::new(x.clone(), terms::rdf_type(), Term::Iri(class.clone())).ok()
                                }
                                _ => None,
                            })
                            .filter(|t| graph.contains(t))
                            .collect(),
                        None => graph.matching(Some(&x), Some(&terms::rdf_type()), None),
                    };
                    if types.is_empty() {
                        writeln!(out, "no type assertions to explain for {}", graph.compact(&iri))?;
                    }
                    for t in types {
                        match explain(saturation, &t) {
                            Ok(tree) => write!(out, "{}", tree.render(graph))?,
                            Err(e) => writeln!(out, "error: {e}")?,
                        }
                    }
                }
            }
            continue;
        }
        if line.starts_with(':') {
            writeln!(out, "error: unknown command {line}")?;
            continue;
        }
        match parse(line, graph.prefixes()) {
            Ok(expr) => {
                let result = evaluate(&expr, graph);
                for w in &result.warnings {
                    writeln!(out, "warning: {w}")?;
                }
                write!(out, "{}", result.render(graph))?;
                last = Some(expr);
            }
            Err(e) => writeln!(out, "error: {e}")?,
        }
        out.flush()?;
    }
    Ok(())
}
