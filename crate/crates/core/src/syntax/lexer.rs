//! Tokenizer.
//!
//! Whitespace is skipped; every other byte of the source belongs to exactly
//! one token. Passive text (a `"..."` run) is a single token.

use serde::{Deserialize, Serialize};

use crate::error::SyntaxError;

/// Half-open byte range into the source.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn to(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }

    pub fn shifted(self, offset: usize) -> Span {
        Span::new(self.start + offset, self.end + offset)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Command,
    Identifier,
    Number,
    Operator,
    OpenParen,
    CloseParen,
    OpenBrace,
    CloseBrace,
    Semicolon,
    Equals,
    Comma,
    PassiveRun,
    Subscript,
    DifferentialMarker,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: Span,
}

impl Token {
    pub fn is(&self, kind: TokenKind, lexeme: &str) -> bool {
        self.kind == kind && self.lexeme == lexeme
    }
}

/// Tracks `\int` bodies so the `d` that follows one becomes a marker.
#[derive(Default)]
struct IntegralTracker {
    depth: usize,
    awaiting_body: bool,
    open_bodies: Vec<usize>,
    after_body: bool,
}

impl IntegralTracker {
    fn observe(&mut self, tok: &Token) {
        self.after_body = false;
        match tok.kind {
            TokenKind::Command if tok.lexeme == "\\int" => {
                self.awaiting_body = true;
                return;
            }
            TokenKind::OpenParen | TokenKind::OpenBrace => {
                if self.awaiting_body {
                    self.open_bodies.push(self.depth);
                }
                self.depth += 1;
            }
            TokenKind::CloseParen | TokenKind::CloseBrace => {
                self.depth = self.depth.saturating_sub(1);
                if self.open_bodies.last() == Some(&self.depth) {
                    self.open_bodies.pop();
                    self.after_body = true;
                }
            }
            _ => {}
        }
        self.awaiting_body = false;
    }
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, SyntaxError> {
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut tracker = IntegralTracker::default();
    let mut i = 0;

    let push = |tokens: &mut Vec<Token>, tracker: &mut IntegralTracker, kind, start: usize, end: usize| {
        let tok = Token {
            kind,
            lexeme: source[start..end].to_string(),
            span: Span::new(start, end),
        };
        tracker.observe(&tok);
        tokens.push(tok);
    };

    while i < bytes.len() {
        let c = source[i..].chars().next().expect("in bounds");
        let start = i;
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        match c {
            '"' => {
                let mut j = i + 1;
                loop {
                    match bytes.get(j) {
                        None => return Err(SyntaxError::UnterminatedString { span: Span::new(start, bytes.len()) }),
                        Some(b'\\') if bytes.get(j + 1) == Some(&b'"') => j += 2,
                        Some(b'"') => break,
                        Some(_) => j += 1,
                    }
                }
                push(&mut tokens, &mut tracker, TokenKind::PassiveRun, start, j + 1);
                i = j + 1;
            }
            '\\' => {
                let mut j = i + 1;
                while j < bytes.len() && bytes[j].is_ascii_alphabetic() {
                    j += 1;
                }
                if j == i + 1 {
                    let ch = source[j..].chars().next().unwrap_or('\\');
                    return Err(SyntaxError::UnknownCharacter {
                        ch,
                        span: Span::new(start, (j + ch.len_utf8()).min(bytes.len())),
                    });
                }
                push(&mut tokens, &mut tracker, TokenKind::Command, start, j);
                i = j;
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_alphabetic() {
                    j += 1;
                }
                if tracker.after_body && bytes[i] == b'd' {
                    push(&mut tokens, &mut tracker, TokenKind::DifferentialMarker, i, i + 1);
                    if j > i + 1 {
                        push(&mut tokens, &mut tracker, TokenKind::Identifier, i + 1, j);
                    }
                } else {
                    push(&mut tokens, &mut tracker, TokenKind::Identifier, start, j);
                }
                i = j;
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j + 1 < bytes.len() && bytes[j] == b'.' && bytes[j + 1].is_ascii_digit() {
                    j += 1;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                push(&mut tokens, &mut tracker, TokenKind::Number, start, j);
                i = j;
            }
            _ => {
                let kind = match c {
                    '+' | '-' | '*' | '/' | '^' => TokenKind::Operator,
                    '(' => TokenKind::OpenParen,
                    ')' => TokenKind::CloseParen,
                    '{' => TokenKind::OpenBrace,
                    '}' => TokenKind::CloseBrace,
                    ';' => TokenKind::Semicolon,
                    '=' => TokenKind::Equals,
                    ',' => TokenKind::Comma,
                    '_' => TokenKind::Subscript,
                    other => {
                        return Err(SyntaxError::UnknownCharacter {
                            ch: other,
                            span: Span::new(start, start + other.len_utf8()),
                        })
                    }
                };
                push(&mut tokens, &mut tracker, kind, start, start + 1);
                i += 1;
            }
        }
    }
    Ok(tokens)
}
