//! Turtle subset: `@prefix`/`PREFIX` directives, prefixed names, the `a`
//! keyword, `;` and `,` lists, and literals with `^^` datatypes or `@lang`
//! tags (plus bare integers, decimals and booleans). Collections, blank-node
//! property lists, `@base` and long strings are rejected as unsupported.

use std::collections::HashMap;

use super::term::{BlankLabel, Iri, Literal, Term, Triple};
use super::vocab;
use super::{Graph, RdfError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    IriRef(String),
    PName { prefix: String, local: String },
    PrefixDecl { sparql: bool },
    BaseDecl,
    Blank(String),
    Str(String),
    LangTag(String),
    Caret2,
    Integer(String),
    Decimal(String),
    Boolean(String),
    A,
    Dot,
    Semi,
    Comma,
    Unsupported(&'static str),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

pub fn parse_turtle_subset(text: &str) -> Result<Graph, RdfError> {
    let tokens = Lexer::new(text).tokenize()?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        prefixes: HashMap::new(),
        graph: Graph::new(),
    };
    parser.document()?;
    Ok(parser.graph)
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Lexer {
    fn new(text: &str) -> Self {
        Lexer {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn err(&self, reason: impl Into<String>) -> RdfError {
        RdfError::Syntax {
            line: self.line,
            column: self.column,
            reason: reason.into(),
        }
    }

    fn tokenize(mut self) -> Result<Vec<Spanned>, RdfError> {
        let mut out = Vec::new();
        loop {
            while let Some(c) = self.peek() {
                if c.is_whitespace() {
                    self.bump();
                } else if c == '#' {
                    while self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                } else {
                    break;
                }
            }
            let Some(c) = self.peek() else { break };
            let (line, column) = (self.line, self.column);
            let tok = match c {
                '<' => self.iri_ref()?,
                '"' | '\'' => self.string(c)?,
                '@' => self.at_word()?,
                '^' => {
                    self.bump();
                    if self.bump() != Some('^') {
                        return Err(self.err("expected '^^'"));
                    }
                    Tok::Caret2
                }
                '.' if !self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) => {
                    self.bump();
                    Tok::Dot
                }
                ';' => {
                    self.bump();
                    Tok::Semi
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '[' | ']' => {
                    self.bump();
                    Tok::Unsupported("blank-node property list")
                }
                '(' | ')' => {
                    self.bump();
                    Tok::Unsupported("collection")
                }
                '_' if self.peek_at(1) == Some(':') => {
                    self.bump();
                    self.bump();
                    let label = self.take_while(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-'));
                    Tok::Blank(label)
                }
                c if c.is_ascii_digit() || matches!(c, '+' | '-' | '.') => self.number()?,
                _ => self.name()?,
            };
            out.push(Spanned { tok, line, column });
        }
        Ok(out)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn iri_ref(&mut self) -> Result<Tok, RdfError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return Err(self.err("unterminated IRI")),
                Some('>') => return Ok(Tok::IriRef(s)),
                Some('\\') => {
                    let n = match self.bump() {
                        Some('u') => 4,
                        Some('U') => 8,
                        _ => return Err(self.err("invalid escape in IRI")),
                    };
                    s.push(self.hex(n)?);
                }
                Some(c) => s.push(c),
            }
        }
    }

    fn hex(&mut self, n: usize) -> Result<char, RdfError> {
        let mut h = String::new();
        for _ in 0..n {
            h.push(self.bump().ok_or_else(|| self.err("truncated unicode escape"))?);
        }
        u32::from_str_radix(&h, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| self.err(format!("invalid unicode escape {h:?}")))
    }

    fn string(&mut self, quote: char) -> Result<Tok, RdfError> {
        if self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote) {
            return Err(RdfError::Unsupported {
                construct: "long string literal".into(),
                line: self.line,
                column: self.column,
            });
        }
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return Err(self.err("unterminated string literal")),
                Some(c) if c == quote => break,
                Some('\\') => {
                    let c = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex(4)?,
                        Some('U') => self.hex(8)?,
                        _ => return Err(self.err("invalid escape sequence")),
                    };
                    s.push(c);
                }
                Some(c) => s.push(c),
            }
        }
        Ok(Tok::Str(s))
    }

    fn at_word(&mut self) -> Result<Tok, RdfError> {
        self.bump();
        let word = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
        Ok(match word.as_str() {
            "prefix" => Tok::PrefixDecl { sparql: false },
            "base" => Tok::BaseDecl,
            "" => return Err(self.err("empty '@' token")),
            _ => Tok::LangTag(word),
        })
    }

    fn number(&mut self) -> Result<Tok, RdfError> {
        let mut s = String::new();
        if matches!(self.peek(), Some('+' | '-')) {
            s.push(self.bump().unwrap());
        }
        s.push_str(&self.take_while(|c| c.is_ascii_digit()));
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            s.push(self.bump().unwrap());
            s.push_str(&self.take_while(|c| c.is_ascii_digit()));
            return Ok(Tok::Decimal(s));
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            return Err(RdfError::Unsupported {
                construct: "double literal".into(),
                line: self.line,
                column: self.column,
            });
        }
        if s.chars().any(|c| c.is_ascii_digit()) {
            Ok(Tok::Integer(s))
        } else {
            Err(self.err("malformed number"))
        }
    }

    fn name(&mut self) -> Result<Tok, RdfError> {
        let is_pn = |c: char| c.is_alphanumeric() || matches!(c, '_' | '-');
        let prefix = self.take_while(is_pn);
        if self.peek() != Some(':') {
            return match prefix.as_str() {
                "a" => Ok(Tok::A),
                "true" | "false" => Ok(Tok::Boolean(prefix)),
                p if p.eq_ignore_ascii_case("prefix") => Ok(Tok::PrefixDecl { sparql: true }),
                p if p.eq_ignore_ascii_case("base") => Ok(Tok::BaseDecl),
                "" => Err(self.err(format!("unexpected character {:?}", self.peek().unwrap_or(' ')))),
                other => Err(self.err(format!("unexpected bare word {other:?}"))),
            };
        }
        self.bump();
        // Local names may contain '.', but not as the final character.
        let mut local = String::new();
        while let Some(c) = self.peek() {
            let inner_dot = c == '.' && self.peek_at(1).is_some_and(|d| is_pn(d) || d == '/');
            if !(is_pn(c) || matches!(c, '/' | '%') || inner_dot) {
                break;
            }
            local.push(c);
            self.bump();
        }
        Ok(Tok::PName { prefix, local })
    }
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    prefixes: HashMap<String, String>,
    graph: Graph,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Result<Spanned, RdfError> {
        let t = self.tokens.get(self.pos).cloned().ok_or_else(|| self.eof_error())?;
        self.pos += 1;
        Ok(t)
    }

    fn eof_error(&self) -> RdfError {
        let (line, column) = self.tokens.last().map(|t| (t.line, t.column)).unwrap_or((1, 1));
        RdfError::Syntax {
            line,
            column,
            reason: "unexpected end of input".into(),
        }
    }

    fn syntax(at: &Spanned, reason: impl Into<String>) -> RdfError {
        if let Tok::Unsupported(what) = at.tok {
            return RdfError::Unsupported {
                construct: what.into(),
                line: at.line,
                column: at.column,
            };
        }
        RdfError::Syntax {
            line: at.line,
            column: at.column,
            reason: reason.into(),
        }
    }

    fn document(&mut self) -> Result<(), RdfError> {
        while let Some(tok) = self.peek().cloned() {
            match tok.tok {
                Tok::PrefixDecl { .. } => self.prefix_directive()?,
                Tok::BaseDecl => {
                    return Err(RdfError::Unsupported {
                        construct: "@base".into(),
                        line: tok.line,
                        column: tok.column,
                    })
                }
                _ => self.triples()?,
            }
        }
        Ok(())
    }

    fn prefix_directive(&mut self) -> Result<(), RdfError> {
        let kw = self.next()?;
        let sparql_style = matches!(kw.tok, Tok::PrefixDecl { sparql: true });
        let name = self.next()?;
        let Tok::PName { prefix, local } = &name.tok else {
            return Err(Self::syntax(&name, "expected prefix label"));
        };
        if !local.is_empty() {
            return Err(Self::syntax(&name, "expected prefix label ending in ':'"));
        }
        let iri = self.next()?;
        let Tok::IriRef(ns) = &iri.tok else {
            return Err(Self::syntax(&iri, "expected namespace IRI"));
        };
        Iri::new(ns.clone()).map_err(|e| Self::syntax(&iri, e.to_string()))?;
        if !sparql_style {
            let dot = self.next()?;
            if dot.tok != Tok::Dot {
                return Err(Self::syntax(&dot, "expected '.' after @prefix"));
            }
        }
        self.graph.add_prefix(prefix, ns)?;
        self.prefixes.insert(prefix.clone(), ns.clone());
        Ok(())
    }

    fn triples(&mut self) -> Result<(), RdfError> {
        let subj_tok = self.next()?;
        let subject = match &subj_tok.tok {
            Tok::IriRef(_) | Tok::PName { .. } | Tok::Blank(_) => self.term(&subj_tok)?,
            Tok::Str(_) | Tok::Integer(_) | Tok::Decimal(_) | Tok::Boolean(_) => {
                return Err(Self::syntax(&subj_tok, "literal cannot be a subject"))
            }
            _ => return Err(Self::syntax(&subj_tok, "expected subject")),
        };
        loop {
            let verb_tok = self.next()?;
            let predicate = match &verb_tok.tok {
                Tok::A => Iri::from_static(vocab::RDF_TYPE),
                Tok::IriRef(_) | Tok::PName { .. } => match self.term(&verb_tok)? {
                    Term::Iri(iri) => iri,
                    _ => unreachable!(),
                },
                _ => return Err(Self::syntax(&verb_tok, "expected predicate")),
            };
            loop {
                let obj_tok = self.next()?;
                let object = self.object(&obj_tok)?;
                let triple = Triple::new(subject.clone(), predicate.clone(), object)?;
                self.graph.ingest(triple, None);
                let sep = self.next()?;
                match sep.tok {
                    Tok::Comma => continue,
                    Tok::Semi => {
                        // allow repeated / trailing ';'
                        while self.peek().is_some_and(|t| t.tok == Tok::Semi) {
                            self.pos += 1;
                        }
                        if self.peek().is_some_and(|t| t.tok == Tok::Dot) {
                            self.pos += 1;
                            return Ok(());
                        }
                        break;
                    }
                    Tok::Dot => return Ok(()),
                    _ => return Err(Self::syntax(&sep, "expected ',', ';' or '.'")),
                }
            }
        }
    }

    fn term(&self, tok: &Spanned) -> Result<Term, RdfError> {
        match &tok.tok {
            Tok::IriRef(text) => Iri::new(text.clone())
                .map(Term::Iri)
                .map_err(|e| Self::syntax(tok, e.to_string())),
            Tok::PName { prefix, local } => {
                let ns = self.prefixes.get(prefix).ok_or_else(|| RdfError::UndefinedPrefix {
                    prefix: prefix.clone(),
                    line: tok.line,
                    column: tok.column,
                })?;
                Iri::new(format!("{ns}{local}"))
                    .map(Term::Iri)
                    .map_err(|e| Self::syntax(tok, e.to_string()))
            }
            Tok::Blank(label) => BlankLabel::new(label.clone())
                .map(Term::Blank)
                .map_err(|e| Self::syntax(tok, e.to_string())),
            _ => Err(Self::syntax(tok, "expected IRI or blank node")),
        }
    }

    fn object(&mut self, tok: &Spanned) -> Result<Term, RdfError> {
        let xsd = |local: &str| Iri::from_static(&format!("{}{local}", vocab::XSD));
        match &tok.tok {
            Tok::IriRef(_) | Tok::PName { .. } | Tok::Blank(_) => self.term(tok),
            Tok::Integer(n) => Ok(Term::Literal(Literal::typed(n.clone(), xsd("integer")))),
            Tok::Decimal(n) => Ok(Term::Literal(Literal::typed(n.clone(), xsd("decimal")))),
            Tok::Boolean(b) => Ok(Term::Literal(Literal::typed(b.clone(), xsd("boolean")))),
            Tok::Str(s) => {
                let s = s.clone();
                match self.peek().map(|t| t.tok.clone()) {
                    Some(Tok::LangTag(lang)) => {
                        let at = self.next()?;
                        Literal::lang_string(s, &lang)
                            .map(Term::Literal)
                            .map_err(|e| Self::syntax(&at, e.to_string()))
                    }
                    Some(Tok::Caret2) => {
                        self.next()?;
                        let dt_tok = self.next()?;
                        match self.term(&dt_tok)? {
                            Term::Iri(dt) if dt.as_str() != vocab::RDF_LANG_STRING => {
                                Ok(Term::Literal(Literal::typed(s, dt)))
                            }
                            _ => Err(Self::syntax(&dt_tok, "invalid datatype")),
                        }
                    }
                    _ => Ok(Term::Literal(Literal::string(s))),
                }
            }
            _ => Err(Self::syntax(tok, "expected object")),
        }
    }
}
