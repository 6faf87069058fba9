//! Mathpar source: tokens, documents and statements.
//!
//! A document interleaves passive text (double-quoted, rendered but never
//! evaluated) with active statements separated by semicolons or by passive
//! text.

mod lexer;
mod parser;

pub use lexer::{tokenize, Span, Token, TokenKind};
pub use parser::{parse_document, parse_document_with, parse_expression, parse_expression_with};

use crate::error::SyntaxError;
use crate::expr::{Expr, SymbolName};
use crate::units::UnitRegistry;

#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub segments: Vec<Segment>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Segment {
    Passive(PassiveText),
    Active(Vec<Statement>),
}

/// One double-quoted run, kept verbatim alongside its pieces.
#[derive(Clone, Debug, PartialEq)]
pub struct PassiveText {
    /// The lexeme including the surrounding quotes.
    pub raw: String,
    pub chunks: Vec<TextChunk>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TextChunk {
    Text(String),
    /// `$...$` inside passive text. `expr` is `None` when the math is not
    /// valid Mathpar; it is displayed either way and never evaluated.
    InlineMath { source: String, expr: Option<Expr> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Statement {
    pub kind: StatementKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StatementKind {
    Assignment { name: SymbolName, rhs: Expr },
    Bare(Expr),
    Print(Vec<Expr>),
}

impl Document {
    pub fn statements(&self) -> impl Iterator<Item = &Statement> {
        self.segments.iter().flat_map(|s| match s {
            Segment::Active(stmts) => stmts.as_slice(),
            Segment::Passive(_) => &[],
        })
    }

    pub fn has_print(&self) -> bool {
        self.statements()
            .any(|s| matches!(s.kind, StatementKind::Print(_)))
    }
}

/// Tokenizes and parses a whole document.
pub fn parse_source(source: &str, units: &UnitRegistry) -> Result<Document, SyntaxError> {
    parse_document_with(&tokenize(source)?, units)
}

/// Splits the inside of a passive run into text and inline math.
pub(crate) fn split_passive(raw: &str, units: &UnitRegistry) -> Vec<TextChunk> {
    let inner = raw
        .strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .unwrap_or(raw);
    let mut chunks = Vec::new();
    let mut rest = inner;
    while let Some(open) = rest.find('$') {
        let Some(close) = rest[open + 1..].find('$') else {
            break;
        };
        if open > 0 {
            chunks.push(TextChunk::Text(rest[..open].to_string()));
        }
        let math = &rest[open + 1..open + 1 + close];
        let expr = tokenize(math)
            .ok()
            .and_then(|t| parse_expression_with(&t, units).ok());
        chunks.push(TextChunk::InlineMath {
            source: math.to_string(),
            expr,
        });
        rest = &rest[open + close + 2..];
    }
    if !rest.is_empty() {
        chunks.push(TextChunk::Text(rest.to_string()));
    }
    chunks
}
