//! Recursive-descent parser.
//!
//! Precedence from loosest to tightest: sums, a leading unary sign on a
//! product term, products (explicit `*`, `/`, `\cdot` and juxtaposition,
//! all left-associative), powers (right-associative), and finally atoms,
//! parenthesized groups and command applications.

use crate::error::SyntaxError;
use crate::expr::{is_greek, Expr, FuncKind, SymbolName, UnitSymbol};
use crate::number::Number;
use crate::units::UnitRegistry;

use super::lexer::{Span, Token, TokenKind};
use super::{split_passive, Document, PassiveText, Segment, Statement, StatementKind};

type Result<T> = std::result::Result<T, SyntaxError>;

pub fn parse_document(tokens: &[Token]) -> Result<Document> {
    parse_document_with(tokens, &UnitRegistry::default())
}

pub fn parse_document_with(tokens: &[Token], units: &UnitRegistry) -> Result<Document> {
    Parser::new(tokens, units).document()
}

pub fn parse_expression(tokens: &[Token]) -> Result<Expr> {
    parse_expression_with(tokens, &UnitRegistry::default())
}

pub fn parse_expression_with(tokens: &[Token], units: &UnitRegistry) -> Result<Expr> {
    let mut p = Parser::new(tokens, units);
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(t) => Err(p.unexpected("end of expression", t)),
    }
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    units: &'a UnitRegistry,
}

fn describe(tok: &Token) -> String {
    match tok.kind {
        TokenKind::PassiveRun => "passive text".to_string(),
        _ => format!("`{}`", tok.lexeme),
    }
}

impl<'a> Parser<'a> {
    fn new(tokens: &'a [Token], units: &'a UnitRegistry) -> Self {
        Parser { tokens, pos: 0, units }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&'a Token> {
        self.tokens.get(self.pos + offset)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn end_span(&self) -> Span {
        self.tokens.last().map_or(Span::default(), |t| Span::new(t.span.end, t.span.end))
    }

    fn prev_span(&self) -> Span {
        self.pos
            .checked_sub(1)
            .and_then(|i| self.tokens.get(i))
            .map_or(Span::default(), |t| t.span)
    }

    fn unexpected(&self, expected: &str, found: &Token) -> SyntaxError {
        SyntaxError::Unexpected {
            expected: expected.to_string(),
            found: describe(found),
            span: found.span,
        }
    }

    fn eof(&self, expected: &str) -> SyntaxError {
        SyntaxError::Unexpected {
            expected: expected.to_string(),
            found: "end of input".to_string(),
            span: self.end_span(),
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<&'a Token> {
        match self.peek() {
            Some(t) if t.kind == kind => {
                self.pos += 1;
                Ok(t)
            }
            Some(t) => Err(self.unexpected(what, t)),
            None => Err(self.eof(what)),
        }
    }

    fn at(&self, kind: TokenKind) -> bool {
        self.peek().is_some_and(|t| t.kind == kind)
    }

    fn at_op(&self, op: &str) -> bool {
        self.peek().is_some_and(|t| t.is(TokenKind::Operator, op))
    }

    // -- document level -----------------------------------------------------

    fn document(&mut self) -> Result<Document> {
        let mut segments = Vec::new();
        while let Some(tok) = self.peek() {
            if tok.kind == TokenKind::PassiveRun {
                self.pos += 1;
                segments.push(Segment::Passive(PassiveText {
                    raw: tok.lexeme.clone(),
                    chunks: split_passive(&tok.lexeme, self.units),
                    span: tok.span,
                }));
            } else {
                let stmts = self.statements()?;
                if !stmts.is_empty() {
                    segments.push(Segment::Active(stmts));
                }
            }
        }
        Ok(Document { segments })
    }

    fn statements(&mut self) -> Result<Vec<Statement>> {
        let mut out = Vec::new();
        loop {
            while self.at(TokenKind::Semicolon) {
                self.pos += 1;
            }
            match self.peek() {
                None => break,
                Some(t) if t.kind == TokenKind::PassiveRun => break,
                Some(_) => {}
            }
            out.push(self.statement()?);
            match self.peek() {
                None => break,
                Some(t) if t.kind == TokenKind::Semicolon || t.kind == TokenKind::PassiveRun => {}
                Some(t) => return Err(self.unexpected("`;` or passive text", t)),
            }
        }
        Ok(out)
    }

    fn statement(&mut self) -> Result<Statement> {
        let start = self.peek().expect("caller checked").span;
        if self.peek().is_some_and(|t| t.is(TokenKind::Command, "\\print")) {
            self.pos += 1;
            self.expect(TokenKind::OpenParen, "`(` after \\print")?;
            let mut args = vec![self.expr()?];
            while self.at(TokenKind::Comma) {
                self.pos += 1;
                args.push(self.expr()?);
            }
            self.expect(TokenKind::CloseParen, "`)` or `,`")?;
            return Ok(Statement {
                kind: StatementKind::Print(args),
                span: start.to(self.prev_span()),
            });
        }
        if self.is_assignment() {
            let name = self.symbol_name()?;
            self.expect(TokenKind::Equals, "`=`")?;
            let rhs = self.expr()?;
            return Ok(Statement {
                kind: StatementKind::Assignment { name, rhs },
                span: start.to(self.prev_span()),
            });
        }
        let e = self.expr()?;
        Ok(Statement {
            kind: StatementKind::Bare(e),
            span: start.to(self.prev_span()),
        })
    }

    fn is_assignment(&self) -> bool {
        self.assignment_target_len().is_some()
    }

    /// Number of tokens in a `name =` prefix, if the statement starts with one.
    fn assignment_target_len(&self) -> Option<usize> {
        let first = self.peek()?;
        let is_name = match first.kind {
            TokenKind::Identifier => true,
            TokenKind::Command => is_greek(&first.lexeme[1..]),
            _ => false,
        };
        if !is_name {
            return None;
        }
        let mut n = 1;
        if self.peek_at(n)?.kind == TokenKind::Subscript {
            n += 1;
            match self.peek_at(n)?.kind {
                TokenKind::Identifier | TokenKind::Number => n += 1,
                TokenKind::OpenBrace => {
                    n += 1;
                    while self.peek_at(n)?.kind != TokenKind::CloseBrace {
                        n += 1;
                    }
                    n += 1;
                }
                _ => return None,
            }
        }
        (self.peek_at(n)?.kind == TokenKind::Equals).then_some(n)
    }

    // -- names --------------------------------------------------------------

    fn symbol_name(&mut self) -> Result<SymbolName> {
        let tok = self.bump().ok_or_else(|| self.eof("a name"))?;
        let base = match tok.kind {
            TokenKind::Identifier => tok.lexeme.clone(),
            TokenKind::Command if is_greek(&tok.lexeme[1..]) => tok.lexeme[1..].to_string(),
            _ => return Err(self.unexpected("a name", tok)),
        };
        let subscript = if self.at(TokenKind::Subscript) {
            self.pos += 1;
            Some(self.subscript()?)
        } else {
            None
        };
        Ok(SymbolName { base, subscript })
    }

    fn subscript(&mut self) -> Result<String> {
        let tok = self.bump().ok_or_else(|| self.eof("a subscript"))?;
        match tok.kind {
            TokenKind::Identifier => Ok(tok.lexeme.clone()),
            TokenKind::Number if tok.lexeme.bytes().all(|b| b.is_ascii_digit()) => Ok(tok.lexeme.clone()),
            TokenKind::OpenBrace => {
                let mut text = String::new();
                loop {
                    let t = self.bump().ok_or_else(|| self.eof("`}`"))?;
                    match t.kind {
                        TokenKind::CloseBrace if !text.is_empty() => return Ok(text),
                        TokenKind::Identifier => text.push_str(&t.lexeme),
                        TokenKind::Number if t.lexeme.bytes().all(|b| b.is_ascii_digit()) => {
                            text.push_str(&t.lexeme)
                        }
                        _ => return Err(self.unexpected("a letter or digit subscript", t)),
                    }
                }
            }
            _ => Err(self.unexpected("a subscript", tok)),
        }
    }

    fn name_expr(&mut self) -> Result<Expr> {
        let name = self.symbol_name()?;
        Ok(match self.units.unit_for(&name) {
            Some(u) => Expr::Unit(u.clone()),
            None => Expr::Symbol(name),
        })
    }

    // -- expressions --------------------------------------------------------

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.signed_term()?];
        loop {
            if self.at_op("+") {
                self.pos += 1;
                terms.push(self.signed_term()?);
            } else if self.at_op("-") {
                self.pos += 1;
                terms.push(negate(self.signed_term()?));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Add(terms)
        })
    }

    fn signed_term(&mut self) -> Result<Expr> {
        if self.at_op("-") {
            self.pos += 1;
            return Ok(negate(self.signed_term()?));
        }
        if self.at_op("+") {
            self.pos += 1;
            return self.signed_term();
        }
        self.product()
    }

    fn starts_primary(&self) -> bool {
        match self.peek() {
            Some(t) => match t.kind {
                TokenKind::Number | TokenKind::Identifier | TokenKind::OpenParen | TokenKind::OpenBrace => true,
                TokenKind::Command => !matches!(t.lexeme.as_str(), "\\cdot" | "\\print"),
                _ => false,
            },
            None => false,
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut factors = vec![(self.power()?, 1)];
        loop {
            let exp = if self.at_op("*") || self.peek().is_some_and(|t| t.is(TokenKind::Command, "\\cdot")) {
                self.pos += 1;
                1
            } else if self.at_op("/") {
                self.pos += 1;
                -1
            } else if self.starts_primary() {
                1
            } else {
                break;
            };
            factors.push((self.power()?, exp));
        }
        Ok(if factors.len() == 1 && factors[0].1 == 1 {
            factors.pop().unwrap().0
        } else {
            Expr::Mul(Number::one(), factors)
        })
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.at_op("^") {
            self.pos += 1;
            let exp = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Expr> {
        if self.at_op("-") {
            self.pos += 1;
            return Ok(negate(self.exponent()?));
        }
        self.power()
    }

    fn group(&mut self) -> Result<Expr> {
        let open = self.bump().ok_or_else(|| self.eof("`(`"))?;
        let close = match open.kind {
            TokenKind::OpenParen => TokenKind::CloseParen,
            TokenKind::OpenBrace => TokenKind::CloseBrace,
            _ => return Err(self.unexpected("`(` or `{`", open)),
        };
        let e = self.expr()?;
        self.expect(close, if close == TokenKind::CloseParen { "`)`" } else { "`}`" })?;
        Ok(e)
    }

    fn at_group(&self) -> bool {
        self.at(TokenKind::OpenParen) || self.at(TokenKind::OpenBrace)
    }

    fn primary(&mut self) -> Result<Expr> {
        let tok = self.peek().ok_or_else(|| self.eof("an expression"))?;
        match tok.kind {
            TokenKind::Number => {
                self.pos += 1;
                let n = Number::parse_literal(&tok.lexeme).ok_or_else(|| self.unexpected("a number", tok))?;
                Ok(Expr::Number(n))
            }
            TokenKind::Identifier => self.name_expr(),
            TokenKind::OpenParen | TokenKind::OpenBrace => self.group(),
            TokenKind::Command => self.command(),
            _ => Err(self.unexpected("an expression", tok)),
        }
    }

    fn command(&mut self) -> Result<Expr> {
        let tok = self.peek().expect("caller checked");
        let name = &tok.lexeme[1..];
        if is_greek(name) {
            return self.name_expr();
        }
        self.pos += 1;
        if let Some(kind) = FuncKind::from_name(name) {
            let arg = if self.at_group() { self.group()? } else { self.power()? };
            return Ok(Expr::Func(kind, Box::new(arg)));
        }
        match name {
            "degreeC" => Ok(Expr::Unit(UnitSymbol::degree_celsius())),
            "int" => {
                if !self.at_group() {
                    return Err(match self.peek() {
                        Some(t) => self.unexpected("`(` after \\int", t),
                        None => self.eof("`(` after \\int"),
                    });
                }
                let body = self.group()?;
                if !self.at(TokenKind::DifferentialMarker) {
                    return Err(SyntaxError::MissingDifferential {
                        span: tok.span.to(self.prev_span()),
                    });
                }
                self.pos += 1;
                if !self.peek().is_some_and(|t| {
                    t.kind == TokenKind::Identifier || (t.kind == TokenKind::Command && is_greek(&t.lexeme[1..]))
                }) {
                    return Err(SyntaxError::MissingDifferential {
                        span: tok.span.to(self.prev_span()),
                    });
                }
                let var = self.symbol_name()?;
                Ok(Expr::Integral(Box::new(body), var))
            }
            "D" => {
                self.expect(TokenKind::Subscript, "`_` after \\D")?;
                let var = if self.at(TokenKind::OpenBrace) {
                    self.pos += 1;
                    let v = self.symbol_name()?;
                    self.expect(TokenKind::CloseBrace, "`}`")?;
                    v
                } else {
                    self.symbol_name()?
                };
                if !self.at_group() {
                    return Err(match self.peek() {
                        Some(t) => self.unexpected("`(` after \\D_{..}", t),
                        None => self.eof("`(` after \\D_{..}"),
                    });
                }
                let body = self.group()?;
                Ok(Expr::Derivative(Box::new(body), var))
            }
            "solve" => {
                self.expect(TokenKind::OpenParen, "`(` after \\solve")?;
                let lhs = self.expr()?;
                let rhs = if self.at(TokenKind::Equals) {
                    self.pos += 1;
                    self.expr()?
                } else {
                    Expr::int(0)
                };
                self.expect(TokenKind::CloseParen, "`)`")?;
                Ok(Expr::Solve(Box::new(Expr::Equation(Box::new(lhs), Box::new(rhs)))))
            }
            "value" => {
                self.expect(TokenKind::OpenParen, "`(` after \\value")?;
                let arg = self.expr()?;
                self.expect(TokenKind::CloseParen, "`)`")?;
                Ok(Expr::Value(Box::new(arg)))
            }
            "frac" => {
                if !self.at(TokenKind::OpenBrace) {
                    return Err(match self.peek() {
                        Some(t) => self.unexpected("`{` after \\frac", t),
                        None => self.eof("`{` after \\frac"),
                    });
                }
                let num = self.group()?;
                if !self.at(TokenKind::OpenBrace) {
                    return Err(match self.peek() {
                        Some(t) => self.unexpected("`{` for the denominator", t),
                        None => self.eof("`{` for the denominator"),
                    });
                }
                let den = self.group()?;
                Ok(Expr::Mul(Number::one(), vec![(num, 1), (den, -1)]))
            }
            "print" => Err(SyntaxError::Unexpected {
                expected: "an expression (\\print is a statement)".into(),
                found: "`\\print`".into(),
                span: tok.span,
            }),
            _ => Err(SyntaxError::UnknownCommand {
                name: name.to_string(),
                span: tok.span,
            }),
        }
    }
}

fn negate(e: Expr) -> Expr {
    Expr::Mul(Number::from_i64(-1), vec![(e, 1)])
}
