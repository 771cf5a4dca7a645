//! Parsing model output into triples. Accepts `subject|relation|object`
//! lines and N-Triples lines; every other non-blank line is rejected with a
//! reason. Parsing never aborts.

use serde::Serialize;

use crate::ontology::Gazetteer;
use crate::rdf::{parse_ntriples, vocab, Graph, Iri, Literal, Term, Triple};

use super::prompt::{relation_roster, RelationSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParsedTriple {
    /// 1-based line number in the response.
    pub line: usize,
    pub text: String,
    pub triple: Triple,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reject {
    pub line: usize,
    pub text: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ParsedResponse {
    pub triples: Vec<ParsedTriple>,
    pub rejects: Vec<Reject>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ParseOptions {
    /// Mint `ono:` IRIs for terms that resolve to nothing known, instead of
    /// rejecting the line.
    pub allow_minting: bool,
}

struct Resolver<'a> {
    graph: &'a Graph,
    gazetteer: &'a Gazetteer,
    relations: Vec<RelationSpec>,
    options: ParseOptions,
}

impl Resolver<'_> {
    fn known(&self, iri: &Iri) -> bool {
        self.graph.mentions(&Term::Iri(iri.clone())) || self.graph.predicates().any(|p| p == iri)
    }

    fn relation(&self, name: &str) -> Result<&RelationSpec, String> {
        self.relations
            .iter()
            .find(|r| r.name == name)
            .or_else(|| self.relations.iter().find(|r| r.name.eq_ignore_ascii_case(name)))
            .ok_or_else(|| format!("unknown relation {name:?}"))
    }

    fn entity(&self, surface: &str) -> Result<Iri, String> {
        let explicit = if let Some(inner) = surface.strip_prefix('<').and_then(|s| s.strip_suffix('>')) {
            Some(inner.to_owned())
        } else {
            surface
                .split_once(':')
                .and_then(|(p, local)| self.graph.prefixes().get(p).map(|ns| format!("{ns}{local}")))
        };
        if let Some(text) = explicit {
            let iri = Iri::new(text).map_err(|e| e.to_string())?;
            if self.known(&iri) || self.options.allow_minting {
                return Ok(iri);
            }
            return Err(format!("unknown entity {surface:?}"));
        }
        let mut hits: Vec<&Iri> = self.gazetteer.lookup(surface).into_iter().map(|e| &e.iri).collect();
        hits.sort();
        hits.dedup();
        match hits.as_slice() {
            [one] => return Ok((*one).clone()),
            [] => {}
            many => {
                return Err(format!(
                    "ambiguous term {surface:?}: {}",
                    many.iter().map(|i| i.local_name()).collect::<Vec<_>>().join(", ")
                ))
            }
        }
        if let Ok(iri) = Iri::new(format!("{}{surface}", vocab::ONO)) {
            if self.known(&iri) {
                return Ok(iri);
            }
        }
        if self.options.allow_minting {
            let local: String = surface
                .split_whitespace()
                .collect::<Vec<_>>()
                .join("_")
                .chars()
                .filter(|c| c.is_alphanumeric() || *c == '_' || *c == '-')
                .collect();
            if !local.is_empty() {
                return Ok(Iri::ono(&local));
            }
        }
        Err(format!("unresolvable term {surface:?}"))
    }

    fn object(&self, surface: &str, relation: &RelationSpec) -> Result<Term, String> {
        let datatype = relation
            .range
            .as_ref()
            .filter(|r| r.as_str().starts_with(vocab::XSD));
        match datatype {
            Some(dt) => {
                let lexical = surface.trim_matches('"');
                if dt.as_str() == vocab::XSD_INTEGER {
                    let n: i64 = lexical.parse().map_err(|_| format!("{surface:?} is not an integer"))?;
                    Ok(Term::Literal(Literal::integer(n)))
                } else {
                    Ok(Term::Literal(Literal::typed(lexical, dt.clone())))
                }
            }
            None => self.entity(surface).map(Term::Iri),
        }
    }

    fn pipe_line(&self, line: &str) -> Result<Triple, String> {
        let parts: Vec<&str> = line.split('|').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("expected 3 fields, found {}", parts.len()));
        }
        if parts.iter().any(|p| p.is_empty()) {
            return Err("empty field".into());
        }
        let relation = self.relation(parts[1])?;
        let subject = self.entity(parts[0])?;
        let object = self.object(parts[2], relation)?;
        Triple::new(Term::Iri(subject), relation.iri.clone(), object).map_err(|e| e.to_string())
    }

    fn ntriples_line(&self, line: &str) -> Result<Triple, String> {
        let g = parse_ntriples(line).map_err(|e| e.to_string())?;
        let t = g.triples().into_iter().next().ok_or("no statement")?;
        if !self.relations.iter().any(|r| &r.iri == t.predicate()) {
            return Err(format!("unknown relation {}", t.predicate()));
        }
        for term in [t.subject(), t.object()] {
            if let Some(iri) = term.as_iri() {
                if !self.known(iri) && !self.options.allow_minting {
                    return Err(format!("unknown entity {term}"));
                }
            }
        }
        Ok(t)
    }
}

fn strip_bullet(line: &str) -> &str {
    let l = line.trim();
    for b in ["- ", "* ", "• "] {
        if let Some(rest) = l.strip_prefix(b) {
            return rest.trim();
        }
    }
    l
}

/// Parses a response against the relations and entities of `graph`.
/// Blank lines and code fences are skipped; bullets are tolerated.
pub fn parse_response(text: &str, graph: &Graph, gazetteer: &Gazetteer, options: ParseOptions) -> ParsedResponse {
    let resolver = Resolver {
        graph,
        gazetteer,
        relations: relation_roster(graph),
        options,
    };
    let mut out = ParsedResponse::default();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_bullet(raw);
        if line.is_empty() || line.starts_with("```") {
            continue;
        }
        let result = if line.contains('|') {
            resolver.pipe_line(line)
        } else if line.starts_with('<') || line.starts_with("_:") {
            resolver.ntriples_line(line)
        } else {
            Err("not a triple line".to_owned())
        };
        match result {
            Ok(triple) => out.triples.push(ParsedTriple {
                line: i + 1,
                text: line.to_owned(),
                triple,
            }),
            Err(reason) => out.rejects.push(Reject {
                line: i + 1,
                text: line.to_owned(),
                reason,
            }),
        }
    }
    out
}
