//! Forward-chaining inference over the graph: built-in RDFS-style rules
//! plus user IF-THEN rules, consistency checking and derivation trees.

use thiserror::Error;

pub mod consistency;
pub mod explain;
pub mod rules;
pub mod saturate;

pub use consistency::{check_consistency, Constraints, Inconsistency, InconsistencyKind};
pub use explain::{explain, Explanation};
pub use rules::{builtin_rules, parse_rules, Bindings, PatternTerm, Rule, TriplePattern};
pub use saturate::{saturate, saturate_in_place, Derivation, Saturation, INFERRED_EXTRACTOR};

#[derive(Debug, Error)]
pub enum ReasonerError {
    #[error("rule {rule}: head variable ?{var} does not occur in the body")]
    UnboundHeadVariable { rule: String, var: String },
    #[error("rule {0} has an empty body")]
    EmptyBody(String),
    #[error("rule {0} is defined twice")]
    DuplicateRule(String),
    #[error("rule file line {line}: {reason}")]
    RuleSyntax { line: usize, reason: String },
    #[error("triple not in the graph: {0}")]
    NotFound(String),
}

/// Built-in rules followed by the user rules.
pub fn rule_set(user: &[Rule]) -> Result<Vec<Rule>, ReasonerError> {
    let mut rules = builtin_rules();
    for r in user {
        if rules.iter().any(|b| b.name == r.name) {
            return Err(ReasonerError::DuplicateRule(r.name.clone()));
        }
        rules.push(r.clone());
    }
    Ok(rules)
}
