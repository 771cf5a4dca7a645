//! Line-oriented N-Triples reader and the canonical writer.

use super::term::{sort_canonical, BlankLabel, Iri, Literal, Term, Triple};
use super::vocab;
use super::{Graph, RdfError};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ParseMode {
    /// Abort on the first malformed line.
    #[default]
    Strict,
    /// Skip malformed lines and report them.
    Lenient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseIssue {
    pub line: usize,
    pub error: RdfError,
}

#[derive(Debug, Clone)]
pub struct Parsed {
    pub graph: Graph,
    pub issues: Vec<ParseIssue>,
}

/// Strict parse into a fresh graph.
pub fn parse_ntriples(text: &str) -> Result<Graph, RdfError> {
    parse_ntriples_with(text, ParseMode::Strict).map(|p| p.graph)
}

pub fn parse_ntriples_with(text: &str, mode: ParseMode) -> Result<Parsed, RdfError> {
    let mut graph = Graph::new();
    let mut issues = Vec::new();
    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        match parse_line(line, line_no) {
            Ok(Some(triple)) => {
                graph.ingest(triple, None);
            }
            Ok(None) => {}
            Err(error) => match mode {
                ParseMode::Strict => return Err(error),
                ParseMode::Lenient => issues.push(ParseIssue { line: line_no, error }),
            },
        }
    }
    Ok(Parsed { graph, issues })
}

/// Parses one statement line. Blank and comment-only lines yield `None`.
pub(crate) fn parse_line(line: &str, line_no: usize) -> Result<Option<Triple>, RdfError> {
    let mut cur = Cursor::new(line, line_no);
    cur.skip_ws();
    if cur.at_end() || cur.peek() == Some('#') {
        return Ok(None);
    }
    let subject = match cur.peek() {
        Some('<') => Term::Iri(cur.iri_ref()?),
        Some('_') => Term::Blank(cur.blank()?),
        Some('"') => return Err(cur.error("literal cannot be a subject")),
        _ => return Err(cur.error("expected IRI or blank node as subject")),
    };
    cur.require_ws()?;
    let predicate = match cur.peek() {
        Some('<') => cur.iri_ref()?,
        _ => return Err(cur.error("expected IRI as predicate")),
    };
    cur.require_ws()?;
    let object = cur.object()?;
    cur.skip_ws();
    if cur.peek() != Some('.') {
        return Err(cur.error("expected '.' at end of statement"));
    }
    cur.bump();
    cur.skip_ws();
    if !cur.at_end() && cur.peek() != Some('#') {
        return Err(cur.error("trailing content after '.'"));
    }
    Triple::new(subject, predicate, object).map(Some)
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line,
            _src: src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn error(&self, reason: impl Into<String>) -> RdfError {
        RdfError::Syntax {
            line: self.line,
            column: self.pos + 1,
            reason: reason.into(),
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.pos += 1;
        }
    }

    fn require_ws(&mut self) -> Result<(), RdfError> {
        if !matches!(self.peek(), Some(' ' | '\t')) {
            return Err(self.error("expected whitespace between terms"));
        }
        self.skip_ws();
        Ok(())
    }

    fn iri_ref(&mut self) -> Result<Iri, RdfError> {
        let start = self.pos;
        self.bump(); // '<'
        let mut text = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error("unterminated IRI")),
                Some('>') => break,
                Some('\\') => match self.bump() {
                    Some('u') => text.push(self.hex_escape(4)?),
                    Some('U') => text.push(self.hex_escape(8)?),
                    _ => return Err(self.error("invalid escape in IRI")),
                },
                Some(c) => text.push(c),
            }
        }
        Iri::new(text).map_err(|e| RdfError::Syntax {
            line: self.line,
            column: start + 1,
            reason: e.to_string(),
        })
    }

    fn blank(&mut self) -> Result<BlankLabel, RdfError> {
        self.bump();
        if self.bump() != Some(':') {
            return Err(self.error("expected ':' after '_' in blank node"));
        }
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-'))
        {
            self.pos += 1;
        }
        let label: String = self.chars[start..self.pos].iter().collect();
        BlankLabel::new(label).map_err(|e| self.error(e.to_string()))
    }

    fn object(&mut self) -> Result<Term, RdfError> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some('_') => Ok(Term::Blank(self.blank()?)),
            Some('"') => self.literal().map(Term::Literal),
            _ => Err(self.error("expected IRI, blank node or literal as object")),
        }
    }

    fn literal(&mut self) -> Result<Literal, RdfError> {
        self.bump(); // '"'
        let mut lexical = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error("unterminated string literal")),
                Some('"') => break,
                Some('\\') => lexical.push(self.string_escape()?),
                Some(c) => lexical.push(c),
            }
        }
        match self.peek() {
            Some('@') => {
                self.bump();
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '-') {
                    self.pos += 1;
                }
                let lang: String = self.chars[start..self.pos].iter().collect();
                Literal::lang_string(lexical, &lang).map_err(|e| self.error(e.to_string()))
            }
            Some('^') => {
                self.bump();
                if self.bump() != Some('^') || self.peek() != Some('<') {
                    return Err(self.error("expected ^^<datatype>"));
                }
                let dt = self.iri_ref()?;
                if dt.as_str() == vocab::RDF_LANG_STRING {
                    return Err(self.error("rdf:langString requires a language tag"));
                }
                Ok(Literal::typed(lexical, dt))
            }
            _ => Ok(Literal::string(lexical)),
        }
    }

    fn string_escape(&mut self) -> Result<char, RdfError> {
        Ok(match self.bump() {
            Some('t') => '\t',
            Some('b') => '\u{8}',
            Some('n') => '\n',
            Some('r') => '\r',
            Some('f') => '\u{c}',
            Some('"') => '"',
            Some('\'') => '\'',
            Some('\\') => '\\',
            Some('u') => self.hex_escape(4)?,
            Some('U') => self.hex_escape(8)?,
            _ => return Err(self.error("invalid escape sequence")),
        })
    }

    fn hex_escape(&mut self, digits: usize) -> Result<char, RdfError> {
        let end = self.pos + digits;
        if end > self.chars.len() {
            return Err(self.error("truncated unicode escape"));
        }
        let hex: String = self.chars[self.pos..end].iter().collect();
        self.pos = end;
        u32::from_str_radix(&hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| self.error(format!("invalid unicode escape {hex:?}")))
    }
}

/// Canonical N-Triples: triples in canonical order, one per line, each line
/// terminated by `\n`. Graph content alone determines the bytes.
pub fn serialize_ntriples(graph: &Graph) -> String {
    let mut triples: Vec<Triple> = graph.iter().collect();
    sort_canonical(&mut triples);
    let mut out = String::new();
    for t in &triples {
        out.push_str(&t.to_ntriples());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_literal_line() {
        let g = parse_ntriples("<http://a> <http://b> \"x\" .").unwrap();
        assert_eq!(g.len(), 1);
        let t = &g.triples()[0];
        let lit = t.object().as_literal().unwrap();
        assert_eq!(lit.lexical(), "x");
        assert_eq!(lit.datatype().as_str(), vocab::XSD_STRING);
    }

    #[test]
    fn empty_input() {
        assert!(parse_ntriples("").unwrap().is_empty());
        assert_eq!(serialize_ntriples(&Graph::new()), "");
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\n\n<http://a> <http://b> <http://c> . # trailing\n   \n";
        assert_eq!(parse_ntriples(text).unwrap().len(), 1);
    }

    #[test]
    fn escapes_decoded() {
        let g = parse_ntriples(r#"<http://a> <http://b> "t\tn\nq\"uéU\U0001F600" ."#).unwrap();
        let t = &g.triples()[0];
        assert_eq!(t.object().as_literal().unwrap().lexical(), "t\tn\nq\"uéU😀");
    }

    #[test]
    fn strict_reports_line_number() {
        let text = "<http://a> <http://b> <http://c> .\n<http://a> <http://b> .\n";
        let err = parse_ntriples(text).unwrap_err();
        assert_eq!(err.line(), Some(2));
    }

    #[test]
    fn lenient_skips_and_reports() {
        let text = "<http://a> <http://b> <http://c> .\nnonsense\n\"lit\" <http://b> <http://c> .\n<http://d> <http://b> <http://c> .";
        let parsed = parse_ntriples_with(text, ParseMode::Lenient).unwrap();
        assert_eq!(parsed.graph.len(), 2);
        let lines: Vec<usize> = parsed.issues.iter().map(|i| i.line).collect();
        assert_eq!(lines, vec![2, 3]);
    }

    #[test]
    fn relative_iri_is_error() {
        assert!(parse_ntriples("<a> <http://b> <http://c> .").is_err());
    }

    #[test]
    fn lang_and_typed_literals() {
        let g = parse_ntriples(
            "_:b0 <http://p> \"chat\"@fr .\n_:b0 <http://p> \"5\"^^<http://www.w3.org/2001/XMLSchema#integer> .",
        )
        .unwrap();
        assert_eq!(g.len(), 2);
        let out = serialize_ntriples(&g);
        assert_eq!(parse_ntriples(&out).unwrap(), g);
    }

    #[test]
    fn insertion_order_does_not_change_bytes() {
        let a = Triple::ono("a", "p", "b");
        let b = Triple::ono("c", "p", "d");
        let mut g1 = Graph::new();
        g1.insert(a.clone(), None);
        g1.insert(b.clone(), None);
        let mut g2 = Graph::new();
        g2.insert(b, None);
        g2.insert(a, None);
        assert_eq!(serialize_ntriples(&g1), serialize_ntriples(&g2));
    }
}
