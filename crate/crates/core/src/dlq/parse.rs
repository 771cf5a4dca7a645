//! Class-expression syntax: `term ("and" term)*` where a term is `NAME`,
//! `NAME some NAME`, `NAME only NAME` or `NAME value NAME`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::rdf::{vocab, Iri};

use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ClassExpression {
    Atom { class: Iri },
    /// At least two children.
    And { children: Vec<ClassExpression> },
    Some { role: Iri, filler: Iri },
    Only { role: Iri, filler: Iri },
    Value { role: Iri, individual: Iri },
}

impl ClassExpression {
    /// Conjuncts of an `And`, or the expression itself.
    pub fn conjuncts(&self) -> &[ClassExpression] {
        match self {
            ClassExpression::And { children } => children,
            other => std::slice::from_ref(other),
        }
    }
}

impl fmt::Display for ClassExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassExpression::Atom { class } => write!(f, "{class}"),
            ClassExpression::And { children } => {
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" and ")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
            ClassExpression::Some { role, filler } => write!(f, "{role} some {filler}"),
            ClassExpression::Only { role, filler } => write!(f, "{role} only {filler}"),
            ClassExpression::Value { role, individual } => write!(f, "{role} value {individual}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Keyword {
    And,
    Some,
    Only,
    Value,
}

fn keyword(word: &str) -> Option<Keyword> {
    match word.to_ascii_lowercase().as_str() {
        "and" => Some(Keyword::And),
        "some" => Some(Keyword::Some),
        "only" => Some(Keyword::Only),
        "value" => Some(Keyword::Value),
        _ => None,
    }
}

/// Splits on whitespace, keeping 1-based character columns.
fn words(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (i, c)) in text.char_indices().enumerate() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some((col + 1, i)),
            (true, Some((scol, si))) => {
                out.push((scol, &text[si..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((scol, si)) = start {
        out.push((scol, &text[si..]));
    }
    out
}

pub(crate) fn resolve(name: &str, column: usize, prefixes: &BTreeMap<String, String>) -> Result<Iri, ParseError> {
    let err = |message: String| ParseError { column, message };
    let text = if let Some(inner) = name.strip_prefix('<').and_then(|n| n.strip_suffix('>')) {
        inner.to_owned()
    } else if name == "isA" {
        format!("{}isA", vocab::ONO)
    } else if let Some((prefix, local)) = name.split_once(':') {
        let ns = prefixes
            .get(prefix)
            .ok_or_else(|| err(format!("unknown prefix {prefix:?}")))?;
        format!("{ns}{local}")
    } else {
        format!("{}{name}", vocab::ONO)
    };
    Iri::new(text).map_err(|e| err(e.to_string()))
}

/// Parses a query. Bare names resolve under the `ono:` namespace; `isA`
/// is the `ono:isA` role, which the schema declares a subproperty of
/// `rdf:type`. Keywords are case-insensitive.
pub fn parse(text: &str, prefixes: &BTreeMap<String, String>) -> Result<ClassExpression, ParseError> {
    let tokens = words(text);
    if tokens.is_empty() {
        return Err(ParseError {
            column: 1,
            message: "empty query".into(),
        });
    }
    let end_column = text.chars().count() + 1;
    let mut children = Vec::new();
    let mut i = 0;
    loop {
        let name = |j: usize| -> Result<(usize, &str), ParseError> {
            match tokens.get(j) {
                None => Err(ParseError {
                    column: end_column,
                    message: "expected a name at end of query".into(),
                }),
                Some(&(col, w)) if keyword(w).is_some() => Err(ParseError {
                    column: col,
                    message: format!("expected a name, found keyword {w:?}"),
                }),
                Some(&t) => Ok(t),
            }
        };
        let (col, first) = name(i)?;
        let restriction = tokens.get(i + 1).and_then(|&(kc, w)| keyword(w).map(|k| (kc, w, k)));
        match restriction {
            Some((kc, kw, k @ (Keyword::Some | Keyword::Only | Keyword::Value))) => {
                let (fcol, filler) = name(i + 2).map_err(|e| {
                    if tokens.get(i + 2).is_none() {
                        ParseError {
                            column: kc,
                            message: format!("dangling keyword {kw:?}"),
                        }
                    } else {
                        e
                    }
                })?;
                let role = resolve(first, col, prefixes)?;
                let filler = resolve(filler, fcol, prefixes)?;
                children.push(match k {
                    Keyword::Some => ClassExpression::Some { role, filler },
                    Keyword::Only => ClassExpression::Only { role, filler },
                    _ => ClassExpression::Value {
                        role,
                        individual: filler,
                    },
                });
                i += 3;
            }
            _ => {
                children.push(ClassExpression::Atom {
                    class: resolve(first, col, prefixes)?,
                });
                i += 1;
            }
        }
        match tokens.get(i) {
            None => break,
            Some(&(kc, w)) if keyword(w) == Some(Keyword::And) => {
                if i + 1 == tokens.len() {
                    return Err(ParseError {
                        column: kc,
                        message: "dangling keyword \"and\"".into(),
                    });
                }
                i += 1;
            }
            Some(&(c, w)) => {
                return Err(ParseError {
                    column: c,
                    message: format!("expected \"and\", found {w:?}"),
                })
            }
        }
    }
    Ok(if children.len() == 1 {
        children.remove(0)
    } else {
        ClassExpression::And { children }
    })
}
