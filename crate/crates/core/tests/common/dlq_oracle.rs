//! Brute-force DL query oracle: tests every individual against the
//! definition, over N-Triples text rows.

use std::collections::BTreeSet;

use onconet::dlq::ClassExpression;
use onconet::rdf::{vocab, Iri};
use rand::Rng;

use super::Row;

pub fn known(facts: &BTreeSet<Row>, name: &str) -> bool {
    facts.iter().any(|(s, p, o)| s == name || p == name || o == name)
}

pub fn in_filler(facts: &BTreeSet<Row>, y: &str, f: &str) -> bool {
    let ty = format!("<{}>", vocab::RDF_TYPE);
    let sub = format!("<{}>", vocab::RDFS_SUBCLASS_OF);
    y == f || facts.contains(&(y.into(), ty, f.into())) || facts.contains(&(y.into(), sub, f.into()))
}

pub fn successors<'a>(facts: &'a BTreeSet<Row>, x: &str, r: &str) -> Vec<&'a str> {
    facts
        .iter()
        .filter(|(s, p, _)| s == x && p == r)
        .map(|(_, _, o)| o.as_str())
        .collect()
}

/// (member, admitted vacuously by an `only`)
pub fn holds(facts: &BTreeSet<Row>, x: &str, e: &ClassExpression) -> (bool, bool) {
    let ty = format!("<{}>", vocab::RDF_TYPE);
    let n = |i: &Iri| i.to_string();
    match e {
        ClassExpression::Atom { class } => {
            (known(facts, &n(class)) && facts.contains(&(x.into(), ty, n(class))), false)
        }
        ClassExpression::And { children } => {
            let parts: Vec<(bool, bool)> = children.iter().map(|c| holds(facts, x, c)).collect();
            let all = parts.iter().all(|p| p.0);
            (all, all && parts.iter().any(|p| p.1))
        }
        ClassExpression::Some { role, filler } => {
            let ok = known(facts, &n(role))
                && known(facts, &n(filler))
                && successors(facts, x, &n(role)).iter().any(|y| in_filler(facts, y, &n(filler)));
            (ok, false)
        }
        ClassExpression::Only { role, filler } => {
            if !(known(facts, &n(role)) && known(facts, &n(filler))) {
                return (false, false);
            }
            let succ = successors(facts, x, &n(role));
            if succ.is_empty() {
                return (true, true);
            }
            (succ.iter().all(|y| in_filler(facts, y, &n(filler))), false)
        }
        ClassExpression::Value { role, individual } => {
            let ok = known(facts, &n(role)) && known(facts, &n(individual)) && successors(facts, x, &n(role)).contains(&n(individual).as_str());
            (ok, false)
        }
    }
}

pub fn oracle(facts: &BTreeSet<Row>, e: &ClassExpression) -> (Vec<String>, usize) {
    let universe: BTreeSet<&String> = facts
        .iter()
        .flat_map(|(s, _, o)| [s, o])
        .filter(|t| t.starts_with('<'))
        .collect();
    let mut members = Vec::new();
    let mut vacuous = 0;
    for x in universe {
        let (m, v) = holds(facts, x, e);
        if m {
            members.push(x.clone());
            vacuous += usize::from(v);
        }
    }
    (members, vacuous)
}

pub fn random_expr(rng: &mut impl Rng) -> ClassExpression {
    let name = |rng: &mut dyn rand::RngCore, kind: &str, n: u32| Iri::ono(&format!("{kind}{}", rng.random_range(0..n)));
    let term = |rng: &mut dyn rand::RngCore| match rng.random_range(0..4) {
        0 => ClassExpression::Atom { class: name(rng, "C", 7) },
        1 => ClassExpression::Some {
            role: name(rng, "p", 5),
            filler: if rng.random_bool(0.5) { name(rng, "C", 7) } else { name(rng, "i", 8) },
        },
        2 => ClassExpression::Only {
            role: name(rng, "p", 5),
            filler: name(rng, "C", 7),
        },
        _ => ClassExpression::Value {
            role: name(rng, "p", 5),
            individual: name(rng, "i", 8),
        },
    };
    let k = rng.random_range(1..=3);
    let mut children: Vec<ClassExpression> = (0..k).map(|_| term(rng)).collect();
    if children.len() == 1 {
        children.remove(0)
    } else {
        ClassExpression::And { children }
    }
}
