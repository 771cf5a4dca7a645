//! Sentence splitting and tokenisation.

use serde::{Deserialize, Serialize};

/// Words that end in `.` without ending a sentence. Compared lowercased,
/// with internal dots kept.
const ABBREVIATIONS: &[&str] = &[
    "e.g", "i.e", "cf", "fig", "figs", "eq", "ref", "refs", "al", "vs", "approx", "dr", "prof", "no", "vol", "ca",
    "resp", "sp", "spp",
];

/// A token as a byte span into the text it was cut from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub begin: usize,
    pub end: usize,
}

impl Token {
    pub fn text<'a>(&self, source: &'a str) -> &'a str {
        &source[self.begin..self.end]
    }
}

/// One sentence of a document. `begin`/`end` and token spans are byte
/// offsets into the document body.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub index: usize,
    pub begin: usize,
    pub end: usize,
    pub text: String,
    pub tokens: Vec<Token>,
}

impl Sentence {
    pub fn token_text<'a>(&'a self, token: &Token) -> &'a str {
        &self.text[token.begin - self.begin..token.end - self.begin]
    }
}

fn is_word_char(c: char) -> bool {
    if c.is_alphanumeric() {
        return true;
    }
    // Non-ASCII symbols such as `×` in "DDX3×" stay inside the word, but
    // typographic punctuation (dashes, quotes) does not.
    !c.is_ascii() && !c.is_whitespace() && !('\u{2000}'..='\u{206F}').contains(&c) && !matches!(c, '«' | '»' | '·')
}

/// Splits `text` into word and punctuation tokens. Hyphens between word
/// characters and dots between digits are kept inside the token, so
/// "cell-cycle", "TP53" and "1.5" are single tokens.
pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if !is_word_char(c) {
            tokens.push(Token {
                begin: start,
                end: start + c.len_utf8(),
            });
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < chars.len() {
            let cj = chars[j].1;
            if is_word_char(cj) {
                j += 1;
                continue;
            }
            let next = chars.get(j + 1).map(|&(_, n)| n);
            let prev = chars[j - 1].1;
            let joins = match cj {
                '-' => next.is_some_and(is_word_char),
                '.' => prev.is_ascii_digit() && next.is_some_and(|n| n.is_ascii_digit()),
                _ => false,
            };
            if joins {
                j += 2;
            } else {
                break;
            }
        }
        let end = chars.get(j).map_or(text.len(), |&(b, _)| b);
        tokens.push(Token { begin: start, end });
        i = j;
    }
    tokens
}

/// Lowercased, single-space-joined token sequence of `surface`: the key used
/// for gazetteer lookup.
pub fn normalize_surface(surface: &str) -> String {
    tokenize(surface)
        .iter()
        .map(|t| t.text(surface).to_lowercase())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Same as [`normalize_surface`] but preserving case.
pub fn join_tokens(surface: &str) -> String {
    tokenize(surface)
        .iter()
        .map(|t| t.text(surface))
        .collect::<Vec<_>>()
        .join(" ")
}

fn ends_with_abbreviation(before: &str) -> bool {
    let word: String = before
        .chars()
        .rev()
        .take_while(|c| c.is_alphanumeric() || *c == '.')
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect();
    let word = word.to_lowercase();
    if word.chars().count() == 1 && word.chars().all(|c| c.is_alphabetic()) {
        // Initials such as "J. Smith".
        return true;
    }
    ABBREVIATIONS.contains(&word.as_str())
}

/// Cuts `body` into sentences. A sentence ends at `.`, `?` or `!` when the
/// next non-space character is uppercase, unless the word before a `.` is a
/// known abbreviation or a single-letter initial.
pub fn segment(body: &str) -> Vec<Sentence> {
    let mut bounds = Vec::new();
    let mut start = 0;
    let chars: Vec<(usize, char)> = body.char_indices().collect();
    for (k, &(pos, c)) in chars.iter().enumerate() {
        if !matches!(c, '.' | '?' | '!') {
            continue;
        }
        let Some(&(_, after)) = chars.get(k + 1) else {
            continue;
        };
        if !after.is_whitespace() {
            continue;
        }
        let next = chars[k + 1..].iter().find(|(_, ch)| !ch.is_whitespace());
        let Some(&(_, next_char)) = next else {
            continue;
        };
        if !next_char.is_uppercase() {
            continue;
        }
        if c == '.' && ends_with_abbreviation(&body[..pos]) {
            continue;
        }
        bounds.push((start, pos + 1));
        start = pos + 1;
    }
    bounds.push((start, body.len()));

    let mut sentences = Vec::new();
    for (b, e) in bounds {
        let slice = &body[b..e];
        let trimmed_start = b + (slice.len() - slice.trim_start().len());
        let trimmed_end = b + slice.trim_end().len();
        if trimmed_start >= trimmed_end {
            continue;
        }
        let text = body[trimmed_start..trimmed_end].to_owned();
        let tokens = tokenize(&text)
            .into_iter()
            .map(|t| Token {
                begin: t.begin + trimmed_start,
                end: t.end + trimmed_start,
            })
            .collect();
        sentences.push(Sentence {
            index: sentences.len(),
            begin: trimmed_start,
            end: trimmed_end,
            text,
            tokens,
        });
    }
    sentences
}
