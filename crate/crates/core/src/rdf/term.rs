//! RDF terms, triples and per-triple provenance.

use std::fmt;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::vocab;
use super::RdfError;

/// An absolute IRI.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Iri(String);

impl TryFrom<String> for Iri {
    type Error = RdfError;

    fn try_from(text: String) -> Result<Self, Self::Error> {
        Iri::new(text)
    }
}

impl From<Iri> for String {
    fn from(iri: Iri) -> Self {
        iri.0
    }
}

impl Iri {
    pub fn new(text: impl Into<String>) -> Result<Self, RdfError> {
        let text = text.into();
        validate_iri(&text)?;
        Ok(Iri(text))
    }

    /// Builds an IRI in the project namespace.
    pub fn ono(local: &str) -> Self {
        Iri::new(vocab::ono(local)).expect("ono local names are checked by callers")
    }

    pub(crate) fn from_static(text: &str) -> Self {
        debug_assert!(validate_iri(text).is_ok(), "{text}");
        Iri(text.to_owned())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Text after the last `#`, or after the last `/` when there is no `#`.
    pub fn local_name(&self) -> &str {
        match self.0.rfind('#') {
            Some(i) => &self.0[i + 1..],
            None => self.0.rsplit('/').next().unwrap_or(&self.0),
        }
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

fn validate_iri(text: &str) -> Result<(), RdfError> {
    let bad = |reason: &str| RdfError::InvalidIri {
        iri: text.to_owned(),
        reason: reason.to_owned(),
    };
    if text.is_empty() {
        return Err(bad("empty"));
    }
    if let Some(c) = text
        .chars()
        .find(|c| c.is_whitespace() || c.is_control() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\'))
    {
        return Err(bad(&format!("illegal character {c:?}")));
    }
    let scheme_end = text.find(':').ok_or_else(|| bad("relative IRI (no scheme)"))?;
    let scheme = &text[..scheme_end];
    let mut chars = scheme.chars();
    let scheme_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'));
    if !scheme_ok {
        return Err(bad("relative IRI (no scheme)"));
    }
    Ok(())
}

/// A literal value. The datatype is always present; language-tagged literals
/// carry `rdf:langString`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    lexical: String,
    datatype: Iri,
    lang: Option<String>,
}

impl Literal {
    pub fn string(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: Iri::from_static(vocab::XSD_STRING),
            lang: None,
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype,
            lang: None,
        }
    }

    pub fn integer(value: i64) -> Self {
        Literal::typed(value.to_string(), Iri::from_static(vocab::XSD_INTEGER))
    }

    pub fn lang_string(lexical: impl Into<String>, lang: &str) -> Result<Self, RdfError> {
        let ok = !lang.is_empty()
            && lang.split('-').all(|part| !part.is_empty() && part.chars().all(|c| c.is_ascii_alphanumeric()))
            && lang.chars().next().is_some_and(|c| c.is_ascii_alphabetic());
        if !ok {
            return Err(RdfError::InvalidLiteral(format!("bad language tag {lang:?}")));
        }
        Ok(Literal {
            lexical: lexical.into(),
            datatype: Iri::from_static(vocab::RDF_LANG_STRING),
            lang: Some(lang.to_owned()),
        })
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn lang(&self) -> Option<&str> {
        self.lang.as_deref()
    }

    /// Integer value when the lexical form parses as one, regardless of the
    /// declared numeric datatype.
    pub fn as_integer(&self) -> Option<i64> {
        self.lexical.trim().parse().ok()
    }
}

/// Blank node label, restricted to characters that survive N-Triples
/// unchanged so labels round-trip verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlankLabel(String);

impl BlankLabel {
    pub fn new(label: impl Into<String>) -> Result<Self, RdfError> {
        let label = label.into();
        let ok = !label.is_empty()
            && label.chars().next().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
            && label.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-'));
        if !ok {
            return Err(RdfError::InvalidBlank(label));
        }
        Ok(BlankLabel(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
    Blank(BlankLabel),
}

impl Term {
    pub fn iri(text: impl Into<String>) -> Result<Self, RdfError> {
        Ok(Term::Iri(Iri::new(text)?))
    }

    pub fn ono(local: &str) -> Self {
        Term::Iri(Iri::ono(local))
    }

    pub fn blank(label: impl Into<String>) -> Result<Self, RdfError> {
        Ok(Term::Blank(BlankLabel::new(label)?))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    /// Canonical N-Triples form of the term.
    pub fn to_ntriples(&self) -> String {
        self.to_string()
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

/// Serialised as its N-Triples text.
impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "{iri}"),
            Term::Blank(label) => write!(f, "_:{}", label.0),
            Term::Literal(lit) => {
                f.write_str("\"")?;
                f.write_str(&escape_literal(&lit.lexical))?;
                f.write_str("\"")?;
                if let Some(lang) = &lit.lang {
                    write!(f, "@{lang}")
                } else if lit.datatype.as_str() == vocab::XSD_STRING {
                    Ok(())
                } else {
                    write!(f, "^^{}", lit.datatype)
                }
            }
        }
    }
}

pub(crate) fn escape_literal(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 || c as u32 == 0x7f => {
                out.push_str(&format!("\\u{:04X}", c as u32));
            }
            c => out.push(c),
        }
    }
    out
}

/// A statement. The constructor enforces that the subject is never a literal;
/// the predicate is an [`Iri`] by type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Triple {
    subject: Term,
    predicate: Iri,
    object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Iri, object: Term) -> Result<Self, RdfError> {
        if subject.is_literal() {
            return Err(RdfError::LiteralSubject(subject.to_string()));
        }
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    /// Convenience for `(ono:s, ono:p, ono:o)`.
    pub fn ono(s: &str, p: &str, o: &str) -> Self {
        Triple {
            subject: Term::ono(s),
            predicate: Iri::ono(p),
            object: Term::ono(o),
        }
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn into_parts(self) -> (Term, Iri, Term) {
        (self.subject, self.predicate, self.object)
    }

    /// One N-Triples line without the trailing newline.
    pub fn to_ntriples(&self) -> String {
        self.to_string()
    }

    /// Key used for the canonical ordering: subject, predicate, object,
    /// compared on their N-Triples text.
    pub fn canonical_key(&self) -> (String, String, String) {
        (
            self.subject.to_string(),
            self.predicate.to_string(),
            self.object.to_string(),
        )
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// Where a triple came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    pub extractor: String,
    pub confidence: f64,
    pub timestamp: DateTime<Utc>,
}

impl Provenance {
    pub fn new(
        source: impl Into<String>,
        extractor: impl Into<String>,
        confidence: f64,
        timestamp: DateTime<Utc>,
    ) -> Result<Self, RdfError> {
        if !(0.0..=1.0).contains(&confidence) || confidence.is_nan() {
            return Err(RdfError::InvalidConfidence(confidence));
        }
        Ok(Provenance {
            source: source.into(),
            extractor: extractor.into(),
            confidence,
            timestamp,
        })
    }
}

/// Sorts triples into the canonical order.
pub fn sort_canonical(triples: &mut [Triple]) {
    triples.sort_by_cached_key(Triple::canonical_key);
}
