//! Semi-naive forward chaining to a least fixpoint.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::clock::Clock;
use crate::rdf::{Graph, Provenance, Triple};

use super::rules::{Bindings, Rule, TriplePattern};

/// Extractor name recorded on inferred triples.
pub const INFERRED_EXTRACTOR: &str = "inferred";

/// The rule instance that first produced an inferred triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub rule: String,
    /// Instantiated body, in rule body order.
    pub premises: Vec<Triple>,
    /// Saturation round (1-based) in which the triple first appeared.
    pub round: usize,
}

impl Derivation {
    fn key(&self) -> (&str, Vec<(String, String, String)>) {
        (&self.rule, self.premises.iter().map(Triple::canonical_key).collect())
    }
}

/// A saturated copy of a graph together with how each inferred triple was
/// obtained.
#[derive(Debug, Clone)]
pub struct Saturation {
    pub graph: Graph,
    pub rules: Vec<Rule>,
    /// Inferred triples in canonical order.
    pub inferred: Vec<Triple>,
    pub derivations: HashMap<Triple, Derivation>,
    pub rounds: usize,
}

impl Saturation {
    pub fn is_inferred(&self, triple: &Triple) -> bool {
        self.derivations.contains_key(triple)
    }

    /// Adds asserted triples and continues saturation from them alone.
    /// Returns the newly inferred triples in canonical order.
    pub fn extend(&mut self, triples: impl IntoIterator<Item = (Triple, Option<Provenance>)>, clock: &Clock) -> Vec<Triple> {
        let mut delta = Vec::new();
        for (t, prov) in triples {
            if self.graph.insert(t.clone(), prov) {
                delta.push(t);
            }
        }
        let (new, rounds) = run(&mut self.graph, &self.rules, delta, &mut self.derivations, self.rounds, clock);
        self.rounds = rounds;
        self.inferred.extend(new.iter().cloned());
        crate::rdf::sort_canonical(&mut self.inferred);
        new
    }
}

/// Saturates a copy of `graph` under `rules`. The graph itself is not
/// modified. Rules are expected to be validated by [`Rule::new`].
pub fn saturate(graph: &Graph, rules: &[Rule], clock: &Clock) -> Saturation {
    let mut out = graph.clone();
    let mut derivations = HashMap::new();
    let delta = graph.triples();
    let (inferred, rounds) = run(&mut out, rules, delta, &mut derivations, 0, clock);
    Saturation {
        graph: out,
        rules: rules.to_vec(),
        inferred,
        derivations,
        rounds,
    }
}

/// Inserts the fixpoint closure into `graph` in place, returning the
/// inferred triples in canonical order.
pub fn saturate_in_place(graph: &mut Graph, rules: &[Rule], clock: &Clock) -> Vec<Triple> {
    let delta = graph.triples();
    run(graph, rules, delta, &mut HashMap::new(), 0, clock).0
}

fn run(
    graph: &mut Graph,
    rules: &[Rule],
    mut delta: Vec<Triple>,
    derivations: &mut HashMap<Triple, Derivation>,
    start_round: usize,
    clock: &Clock,
) -> (Vec<Triple>, usize) {
    let mut all_new = Vec::new();
    let mut round = start_round;
    while !delta.is_empty() {
        round += 1;
        let mut fresh: BTreeMap<Triple, Derivation> = BTreeMap::new();
        for rule in rules {
            for (i, pattern) in rule.body.iter().enumerate() {
                for t in &delta {
                    let Some(b) = pattern.unify(t, &Bindings::new()) else {
                        continue;
                    };
                    let mut premises = vec![None; rule.body.len()];
                    premises[i] = Some(t.clone());
                    join(graph, rule, i, 0, b, &mut premises, &mut |head, premises| {
                        if graph.contains(&head) {
                            return;
                        }
                        let d = Derivation {
                            rule: rule.name.clone(),
                            premises: premises.iter().map(|p| p.clone().expect("all premises bound")).collect(),
                            round,
                        };
                        match fresh.get(&head) {
                            Some(existing) if existing.key() <= d.key() => {}
                            _ => {
                                fresh.insert(head, d);
                            }
                        }
                    });
                }
            }
        }
        let now = clock.now();
        delta = Vec::with_capacity(fresh.len());
        for (t, d) in fresh {
            let prov = Provenance::new(format!("rule:{}", d.rule), INFERRED_EXTRACTOR, 1.0, now).expect("valid confidence");
            graph.insert(t.clone(), Some(prov));
            derivations.insert(t.clone(), d);
            delta.push(t);
        }
        all_new.extend(delta.iter().cloned());
    }
    crate::rdf::sort_canonical(&mut all_new);
    (all_new, round)
}

/// Matches the body patterns other than `skip`, from `pos` onwards, against
/// the whole graph, calling `emit` for every complete instantiation.
fn join(
    graph: &Graph,
    rule: &Rule,
    skip: usize,
    pos: usize,
    bindings: Bindings,
    premises: &mut Vec<Option<Triple>>,
    emit: &mut dyn FnMut(Triple, &[Option<Triple>]),
) {
    if pos == rule.body.len() {
        if let Some(head) = rule.head.instantiate(&bindings) {
            emit(head, premises);
        }
        return;
    }
    if pos == skip {
        return join(graph, rule, skip, pos + 1, bindings, premises, emit);
    }
    let pattern: &TriplePattern = &rule.body[pos];
    let Some((s, p, o)) = pattern.lookup_key(&bindings) else {
        return;
    };
    for t in graph.matching_unordered(s.as_ref(), p.as_ref(), o.as_ref()) {
        if let Some(b) = pattern.unify(&t, &bindings) {
            premises[pos] = Some(t);
            join(graph, rule, skip, pos + 1, b, premises, emit);
        }
    }
    premises[pos] = None;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reasoner::builtin_rules;
    use crate::rdf::{parse_turtle_subset, vocab, Iri, Term};

    fn ty(x: &str, c: &str) -> Triple {
        Triple::new(Term::ono(x), Iri::new(vocab::RDF_TYPE).unwrap(), Term::ono(c)).unwrap()
    }

    #[test]
    fn one_step_propagation() {
        let g = parse_turtle_subset(
            "@prefix ono: <http://onconet.example/ono#> .\n\
             @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n\
             ono:HIGH rdfs:subClassOf ono:Significance .\n\
             ono:f a ono:HIGH .",
        )
        .unwrap();
        let s = saturate(&g, &builtin_rules(), &Clock::default());
        assert_eq!(s.inferred, vec![ty("f", "Significance")]);
        let d = &s.derivations[&ty("f", "Significance")];
        assert_eq!(d.rule, "type-propagation");
        assert_eq!(d.round, 1);
        let prov = s.graph.provenance(&ty("f", "Significance")).unwrap();
        assert_eq!(prov.extractor, INFERRED_EXTRACTOR);
        assert!(g.len() + 1 == s.graph.len());
    }

    #[test]
    fn extend_continues_from_delta() {
        let g = parse_turtle_subset(
            "@prefix ono: <http://onconet.example/ono#> .\n\
             @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n\
             ono:A rdfs:subClassOf ono:B .",
        )
        .unwrap();
        let mut s = saturate(&g, &builtin_rules(), &Clock::default());
        assert!(s.inferred.is_empty());
        let new = s.extend([(ty("x", "A"), None)], &Clock::default());
        assert_eq!(new, vec![ty("x", "B")]);
        assert!(s.is_inferred(&ty("x", "B")));
    }

    #[test]
    fn literal_objects_are_not_typed_by_range() {
        let g = parse_turtle_subset(
            "@prefix ono: <http://onconet.example/ono#> .\n\
             @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n\
             @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n\
             ono:hasCitations rdfs:range xsd:integer .\n\
             ono:TP53 ono:hasCitations 12 .",
        )
        .unwrap();
        let s = saturate(&g, &builtin_rules(), &Clock::default());
        assert!(s.inferred.is_empty());
    }
}
