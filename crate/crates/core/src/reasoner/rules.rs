//! Rules, triple patterns, the built-in RDFS-style rule set and the rule
//! file parser.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::rdf::{vocab, Iri, Literal, Term, Triple};

use super::ReasonerError;

/// A position in a triple pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PatternTerm {
    Var(String),
    Const(Term),
}

impl PatternTerm {
    pub fn var(name: &str) -> Self {
        PatternTerm::Var(name.to_owned())
    }

    pub fn iri(iri: &str) -> Self {
        PatternTerm::Const(Term::Iri(Iri::new(iri).expect("static IRI")))
    }

    fn resolve(&self, bindings: &Bindings) -> Option<Term> {
        match self {
            PatternTerm::Var(v) => bindings.get(v).cloned(),
            PatternTerm::Const(t) => Some(t.clone()),
        }
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Var(v) => write!(f, "?{v}"),
            PatternTerm::Const(t) => write!(f, "{t}"),
        }
    }
}

/// Variable assignment produced while matching a rule body.
pub type Bindings = BTreeMap<String, Term>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn new(subject: PatternTerm, predicate: PatternTerm, object: PatternTerm) -> Self {
        TriplePattern {
            subject,
            predicate,
            object,
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        [&self.subject, &self.predicate, &self.object]
            .into_iter()
            .filter_map(|t| match t {
                PatternTerm::Var(v) => Some(v.as_str()),
                PatternTerm::Const(_) => None,
            })
    }

    /// Bound values of the three positions under `bindings`, as used for an
    /// index lookup. A predicate bound to a non-IRI yields `None`.
    pub(crate) fn lookup_key(&self, bindings: &Bindings) -> Option<(Option<Term>, Option<Iri>, Option<Term>)> {
        let p = match self.predicate.resolve(bindings) {
            Some(Term::Iri(iri)) => Some(iri),
            Some(_) => return None,
            None => None,
        };
        Some((self.subject.resolve(bindings), p, self.object.resolve(bindings)))
    }

    /// Extends `bindings` so that the pattern equals `triple`, or returns
    /// `None` when they cannot be unified.
    pub fn unify(&self, triple: &Triple, bindings: &Bindings) -> Option<Bindings> {
        let mut out = bindings.clone();
        let predicate = Term::Iri(triple.predicate().clone());
        for (pat, value) in [
            (&self.subject, triple.subject()),
            (&self.predicate, &predicate),
            (&self.object, triple.object()),
        ] {
            match pat {
                PatternTerm::Const(c) if c != value => return None,
                PatternTerm::Const(_) => {}
                PatternTerm::Var(v) => match out.get(v) {
                    Some(bound) if bound != value => return None,
                    Some(_) => {}
                    None => {
                        out.insert(v.clone(), value.clone());
                    }
                },
            }
        }
        Some(out)
    }

    /// The triple this pattern denotes under `bindings`, if every position
    /// is bound and the result is a valid triple.
    pub fn instantiate(&self, bindings: &Bindings) -> Option<Triple> {
        let s = self.subject.resolve(bindings)?;
        let Term::Iri(p) = self.predicate.resolve(bindings)? else {
            return None;
        };
        let o = self.object.resolve(bindings)?;
        Triple::new(s, p, o).ok()
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {} {})", self.subject, self.predicate, self.object)
    }
}

/// An IF-THEN rule: when every body pattern matches, the head holds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Rule {
    pub name: String,
    pub body: Vec<TriplePattern>,
    pub head: TriplePattern,
}

impl Rule {
    /// Builds a rule, rejecting an empty body or a head variable that the
    /// body does not bind.
    pub fn new(name: impl Into<String>, body: Vec<TriplePattern>, head: TriplePattern) -> Result<Self, ReasonerError> {
        let name = name.into();
        if body.is_empty() {
            return Err(ReasonerError::EmptyBody(name));
        }
        let bound: BTreeSet<&str> = body.iter().flat_map(TriplePattern::vars).collect();
        if let Some(var) = head.vars().find(|v| !bound.contains(v)) {
            return Err(ReasonerError::UnboundHeadVariable {
                rule: name,
                var: var.to_owned(),
            });
        }
        Ok(Rule { name, body, head })
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.name)?;
        for (i, p) in self.body.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, " => {}", self.head)
    }
}

fn pat(s: &str, p: &str, o: &str) -> TriplePattern {
    let term = |x: &str| match x.strip_prefix('?') {
        Some(v) => PatternTerm::var(v),
        None => PatternTerm::iri(x),
    };
    TriplePattern::new(term(s), term(p), term(o))
}

/// Built-in rules: subclass transitivity, type propagation along
/// subclasses, subproperty propagation, and the domain and range rules.
pub fn builtin_rules() -> Vec<Rule> {
    let (ty, sub, subp, dom, ran) = (
        vocab::RDF_TYPE,
        vocab::RDFS_SUBCLASS_OF,
        vocab::RDFS_SUBPROPERTY_OF,
        vocab::RDFS_DOMAIN,
        vocab::RDFS_RANGE,
    );
    let rule = |name: &str, body: Vec<TriplePattern>, head| Rule::new(name, body, head).expect("built-in rule is safe");
    vec![
        rule(
            "subclass-transitivity",
            vec![pat("?a", sub, "?b"), pat("?b", sub, "?c")],
            pat("?a", sub, "?c"),
        ),
        rule("type-propagation", vec![pat("?x", ty, "?c"), pat("?c", sub, "?d")], pat("?x", ty, "?d")),
        rule("subproperty", vec![pat("?x", "?p", "?y"), pat("?p", subp, "?q")], pat("?x", "?q", "?y")),
        rule("domain", vec![pat("?x", "?p", "?y"), pat("?p", dom, "?c")], pat("?x", ty, "?c")),
        rule("range", vec![pat("?x", "?p", "?y"), pat("?p", ran, "?c")], pat("?y", ty, "?c")),
    ]
}

/// Parses a rule file. One rule per line:
///
/// ```text
/// # comment
/// grandparent: (?x ex:parent ?y), (?y ex:parent ?z) => (?x ex:grandparent ?z)
/// ```
///
/// Terms are `?var`, `a`, `<iri>`, prefixed names resolved through
/// `prefixes`, quoted strings and integers.
pub fn parse_rules(text: &str, prefixes: &BTreeMap<String, String>) -> Result<Vec<Rule>, ReasonerError> {
    let mut rules = Vec::new();
    let mut names = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let err = |reason: String| ReasonerError::RuleSyntax { line: line_no, reason };
        let (name, rest) = line.split_once(':').ok_or_else(|| err("expected `name:`".into()))?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '-' || c == '_') {
            return Err(err(format!("bad rule name {name:?}")));
        }
        let (body_text, head_text) = rest.split_once("=>").ok_or_else(|| err("expected `=>`".into()))?;
        let body = parse_patterns(body_text, prefixes).map_err(&err)?;
        let mut head = parse_patterns(head_text, prefixes).map_err(&err)?;
        if head.len() != 1 {
            return Err(err(format!("head must be one pattern, found {}", head.len())));
        }
        if !names.insert(name.to_owned()) {
            return Err(ReasonerError::DuplicateRule(name.to_owned()));
        }
        rules.push(Rule::new(name, body, head.remove(0))?);
    }
    Ok(rules)
}

fn strip_comment(line: &str) -> &str {
    let mut in_iri = false;
    let mut in_str = false;
    let mut prev = ' ';
    for (i, c) in line.char_indices() {
        match c {
            '<' if !in_str => in_iri = true,
            '>' if !in_str => in_iri = false,
            '"' if !in_iri && prev != '\\' => in_str = !in_str,
            '#' if !in_iri && !in_str && prev.is_whitespace() => return &line[..i],
            _ => {}
        }
        prev = c;
    }
    line
}

fn parse_patterns(text: &str, prefixes: &BTreeMap<String, String>) -> Result<Vec<TriplePattern>, String> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let inner_start = rest.strip_prefix('(').ok_or_else(|| format!("expected `(` at {rest:?}"))?;
        let close = find_close(inner_start).ok_or("unclosed `(`")?;
        let terms = split_terms(&inner_start[..close])?;
        if terms.len() != 3 {
            return Err(format!("pattern needs 3 terms, found {}", terms.len()));
        }
        let parsed = terms
            .iter()
            .map(|t| parse_term(t, prefixes))
            .collect::<Result<Vec<_>, _>>()?;
        let [s, p, o]: [PatternTerm; 3] = parsed.try_into().expect("three terms");
        if let PatternTerm::Const(c) = &p {
            if !matches!(c, Term::Iri(_)) {
                return Err(format!("predicate {c} is not an IRI"));
            }
        }
        if matches!(&s, PatternTerm::Const(Term::Literal(_))) {
            return Err("literal in subject position".into());
        }
        out.push(TriplePattern::new(s, p, o));
        rest = inner_start[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return Err("trailing `,`".into());
            }
        } else if !rest.is_empty() {
            return Err(format!("expected `,` before {rest:?}"));
        }
    }
    if out.is_empty() {
        return Err("no patterns".into());
    }
    Ok(out)
}

fn find_close(text: &str) -> Option<usize> {
    let mut in_iri = false;
    let mut in_str = false;
    let mut prev = ' ';
    for (i, c) in text.char_indices() {
        match c {
            '<' if !in_str => in_iri = true,
            '>' if !in_str => in_iri = false,
            '"' if !in_iri && prev != '\\' => in_str = !in_str,
            ')' if !in_iri && !in_str => return Some(i),
            _ => {}
        }
        prev = c;
    }
    None
}

fn split_terms(text: &str) -> Result<Vec<String>, String> {
    let mut terms = Vec::new();
    let mut chars = text.trim().chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let mut term = String::new();
        if c == '"' {
            term.push(chars.next().unwrap());
            let mut closed = false;
            while let Some(c) = chars.next() {
                term.push(c);
                if c == '\\' {
                    term.extend(chars.next());
                } else if c == '"' {
                    closed = true;
                    break;
                }
            }
            if !closed {
                return Err("unterminated string".into());
            }
        }
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() {
                break;
            }
            term.push(c);
            chars.next();
        }
        terms.push(term);
    }
    Ok(terms)
}

fn parse_term(text: &str, prefixes: &BTreeMap<String, String>) -> Result<PatternTerm, String> {
    if let Some(v) = text.strip_prefix('?') {
        if v.is_empty() || !v.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(format!("bad variable {text:?}"));
        }
        return Ok(PatternTerm::var(v));
    }
    if text == "a" {
        return Ok(PatternTerm::iri(vocab::RDF_TYPE));
    }
    let iri = |s: &str| Iri::new(s).map_err(|e| e.to_string());
    if let Some(inner) = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
        return Ok(PatternTerm::Const(Term::Iri(iri(inner)?)));
    }
    if let Some(body) = text.strip_prefix('"') {
        let (lexical, suffix) = body.rsplit_once('"').ok_or("unterminated string")?;
        let lexical = lexical.replace("\\\"", "\"").replace("\\\\", "\\");
        let lit = match suffix.strip_prefix("^^") {
            Some(dt) => Literal::typed(lexical, expand(dt, prefixes).and_then(|s| iri(&s))?),
            None if suffix.is_empty() => Literal::string(lexical),
            None => return Err(format!("unsupported literal suffix {suffix:?}")),
        };
        return Ok(PatternTerm::Const(Term::Literal(lit)));
    }
    if let Ok(n) = text.parse::<i64>() {
        return Ok(PatternTerm::Const(Term::Literal(Literal::integer(n))));
    }
    Ok(PatternTerm::Const(Term::Iri(iri(&expand(text, prefixes)?)?)))
}

fn expand(name: &str, prefixes: &BTreeMap<String, String>) -> Result<String, String> {
    if let Some(inner) = name.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
        return Ok(inner.to_owned());
    }
    let (prefix, local) = name.split_once(':').ok_or_else(|| format!("expected a prefixed name, found {name:?}"))?;
    let ns = prefixes.get(prefix).ok_or_else(|| format!("undefined prefix {prefix:?}"))?;
    Ok(format!("{ns}{local}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prefixes() -> BTreeMap<String, String> {
        vocab::DEFAULT_PREFIXES
            .iter()
            .map(|(p, n)| (p.to_string(), n.to_string()))
            .collect()
    }

    #[test]
    fn parses_rule_file() {
        let text = "# co-responsibility\n\
                    shared: (?g ono:causes ?c), (?h ono:causes ?c) => (?g ono:sharesCancerWith ?h)  # trailing\n\
                    \n\
                    flag: (?g a ono:Biomarker), (?g ono:hasCitations 100) => (?g ono:flag \"well cited\")\n";
        let rules = parse_rules(text, &prefixes()).unwrap();
        assert_eq!(rules.len(), 2);
        assert_eq!(rules[0].name, "shared");
        assert_eq!(rules[0].body.len(), 2);
        assert_eq!(rules[1].body[0].predicate, PatternTerm::iri(vocab::RDF_TYPE));
        assert_eq!(
            rules[1].body[1].object,
            PatternTerm::Const(Term::Literal(Literal::integer(100)))
        );
    }

    #[test]
    fn rejects_unbound_head_variable() {
        let err = parse_rules("bad: (?x ono:p ?y) => (?x ono:q ?z)", &prefixes()).unwrap_err();
        assert!(matches!(err, ReasonerError::UnboundHeadVariable { ref var, .. } if var == "z"));
    }

    #[test]
    fn syntax_errors_carry_line() {
        for text in [
            "\nnoarrow: (?x ono:p ?y)",
            "\nr: (?x ono:p) => (?x ono:q ?x)",
            "\nr: (?x nope:p ?y) => (?x ono:q ?y)",
            "\nr: (?x ono:p ?y) => (?x ono:q ?y), (?y ono:q ?x)",
        ] {
            match parse_rules(text, &prefixes()) {
                Err(ReasonerError::RuleSyntax { line, .. }) => assert_eq!(line, 2, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn duplicate_names_rejected() {
        let text = "r: (?x ono:p ?y) => (?y ono:p ?x)\nr: (?x ono:p ?y) => (?x ono:q ?y)";
        assert!(matches!(parse_rules(text, &prefixes()), Err(ReasonerError::DuplicateRule(_))));
    }

    #[test]
    fn unify_respects_repeated_variables() {
        let p = pat("?x", vocab::RDFS_SUBCLASS_OF, "?x");
        let loop_t = Triple::new(Term::ono("A"), Iri::new(vocab::RDFS_SUBCLASS_OF).unwrap(), Term::ono("A")).unwrap();
        let edge = Triple::new(Term::ono("A"), Iri::new(vocab::RDFS_SUBCLASS_OF).unwrap(), Term::ono("B")).unwrap();
        assert!(p.unify(&loop_t, &Bindings::new()).is_some());
        assert!(p.unify(&edge, &Bindings::new()).is_none());
    }

    #[test]
    fn builtins_are_safe() {
        let rules = builtin_rules();
        assert_eq!(rules.len(), 5);
        for r in &rules {
            assert!(Rule::new(r.name.clone(), r.body.clone(), r.head.clone()).is_ok());
        }
    }
}
