//! Text rendering of expressions, cell results and documents.
//!
//! [`Style::Display`] produces LaTeX-compatible math for typesetting;
//! [`Style::Source`] produces Mathpar text that parses back to an equal
//! expression.

use num_traits::{One, Signed};

use crate::expr::{is_greek, Expr, SymbolName};
use crate::number::Number;
use crate::session::{CellResult, Severity};
use crate::syntax::{Document, Segment, StatementKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Style {
    Display,
    Source,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Equation,
    Sum,
    Neg,
    Product,
    Power,
    Atom,
}

/// What an item in a product starts with; decides the separator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Lead {
    Number,
    Unit,
    Other,
}

pub fn render_expr(e: &Expr, style: Style) -> String {
    Renderer { style }.expr(e).0
}

struct Renderer {
    style: Style,
}

fn symbol_text(s: &SymbolName) -> String {
    let mut out = String::new();
    if is_greek(&s.base) {
        out.push('\\');
    }
    out.push_str(&s.base);
    if let Some(sub) = &s.subscript {
        if sub.len() == 1 {
            out.push('_');
            out.push_str(sub);
        } else {
            out.push_str("_{");
            out.push_str(sub);
            out.push('}');
        }
    }
    out
}

/// Splits a leading minus sign off numbers and products.
fn split_sign(e: &Expr) -> Option<Expr> {
    match e {
        Expr::Number(n) if n.is_negative() => Some(Expr::Number(n.neg())),
        Expr::Mul(c, fs) if c.is_negative() => Some(Expr::Mul(c.neg(), fs.clone())),
        _ => None,
    }
}

impl Renderer {
    fn wrap(&self, (text, prec): (String, Prec), min: Prec) -> String {
        if prec < min {
            format!("({text})")
        } else {
            text
        }
    }

    fn number(&self, n: &Number) -> (String, Prec) {
        if let Some(text) = n.decimal_text() {
            let prec = if text.starts_with('-') { Prec::Neg } else { Prec::Atom };
            return (text, prec);
        }
        let v = n.value();
        let negative = v.is_negative();
        let sign = if negative { "-" } else { "" };
        let (num, den) = (v.numer().abs(), v.denom());
        if den.is_one() {
            let prec = if negative { Prec::Neg } else { Prec::Atom };
            return (format!("{sign}{num}"), prec);
        }
        match self.style {
            Style::Display => {
                let prec = if negative { Prec::Neg } else { Prec::Atom };
                (format!("{sign}\\frac{{{num}}}{{{den}}}"), prec)
            }
            Style::Source => {
                let prec = if negative { Prec::Neg } else { Prec::Product };
                (format!("{sign}{num}/{den}"), prec)
            }
        }
    }

    fn expr(&self, e: &Expr) -> (String, Prec) {
        match e {
            Expr::Number(n) => self.number(n),
            Expr::Symbol(s) => (symbol_text(s), Prec::Atom),
            Expr::Unit(u) => {
                let text = match self.style {
                    Style::Display => u.display.clone(),
                    Style::Source if u.is_command() => format!("\\{}", u.name),
                    Style::Source => u.name.clone(),
                };
                (text, Prec::Atom)
            }
            Expr::Add(terms) => {
                let mut out = String::new();
                for (i, t) in terms.iter().enumerate() {
                    match (i, split_sign(t)) {
                        (0, _) => out.push_str(&self.wrap(self.expr(t), Prec::Neg)),
                        (_, Some(abs)) => {
                            out.push_str(" - ");
                            out.push_str(&self.wrap(self.expr(&abs), Prec::Product));
                        }
                        (_, None) => {
                            out.push_str(" + ");
                            out.push_str(&self.wrap(self.expr(t), Prec::Neg));
                        }
                    }
                }
                (out, Prec::Sum)
            }
            Expr::Mul(c, factors) => self.product(c, factors),
            Expr::Pow(b, x) => {
                let base = self.wrap(self.expr(b), Prec::Atom);
                (format!("{base}^{}", self.exponent(x)), Prec::Power)
            }
            Expr::Func(kind, arg) => {
                (format!("\\{}({})", kind.name(), self.expr(arg).0), Prec::Atom)
            }
            Expr::Integral(body, v) => (
                format!("\\int({}) d {}", self.expr(body).0, symbol_text(v)),
                Prec::Atom,
            ),
            Expr::Derivative(body, v) => (
                format!("\\D_{{{}}}({})", symbol_text(v), self.expr(body).0),
                Prec::Atom,
            ),
            Expr::Solve(eq) => (format!("\\solve({})", self.expr(eq).0), Prec::Atom),
            Expr::Value(arg) => (format!("\\value({})", self.expr(arg).0), Prec::Atom),
            Expr::Equation(l, r) => (
                format!("{} = {}", self.expr(l).0, self.expr(r).0),
                Prec::Equation,
            ),
        }
    }

    fn exponent(&self, x: &Expr) -> String {
        let (text, prec) = self.expr(x);
        match self.style {
            Style::Display => format!("{{{text}}}"),
            Style::Source if prec == Prec::Atom && !matches!(x, Expr::Func(..)) => text,
            Style::Source => format!("({text})"),
        }
    }

    fn power_item(&self, base: &Expr, k: i64) -> (String, Lead) {
        let lead = match base {
            Expr::Number(_) => Lead::Number,
            Expr::Unit(_) => Lead::Unit,
            _ => Lead::Other,
        };
        if k == 1 {
            return (self.wrap(self.expr(base), Prec::Power), lead);
        }
        let text = self.wrap(self.expr(base), Prec::Atom);
        let exp = match self.style {
            Style::Display => format!("^{{{k}}}"),
            Style::Source if k > 0 => format!("^{k}"),
            Style::Source => format!("^({k})"),
        };
        (format!("{text}{exp}"), lead)
    }

    fn join(&self, items: &[(String, Lead)]) -> String {
        let mut out = String::new();
        for (i, (text, lead)) in items.iter().enumerate() {
            if i > 0 {
                let prev = items[i - 1].1;
                let sep = match self.style {
                    Style::Display if prev == Lead::Unit || *lead == Lead::Unit => " \\cdot ",
                    Style::Display if prev == Lead::Number => "",
                    _ => " ",
                };
                out.push_str(sep);
            }
            out.push_str(text);
        }
        out
    }

    fn product(&self, coeff: &Number, factors: &[(Expr, i64)]) -> (String, Prec) {
        let negative = coeff.is_negative();
        let coeff = if negative { coeff.neg() } else { coeff.clone() };

        let mut numer: Vec<(String, Lead)> = Vec::new();
        let mut denom: Vec<(String, Lead)> = Vec::new();
        for (b, k) in factors {
            if *k > 0 {
                numer.push(self.power_item(b, *k));
            } else if *k < 0 {
                denom.push(self.power_item(b, -*k));
            }
        }
        if !coeff.is_one() || numer.is_empty() {
            let (text, _) = self.number(&coeff);
            numer.insert(0, (text, Lead::Number));
        }

        let mut text = self.join(&numer);
        if !denom.is_empty() {
            text.push('/');
            if denom.len() == 1 {
                text.push_str(&denom[0].0);
            } else {
                text.push('(');
                text.push_str(&self.join(&denom));
                text.push(')');
            }
        }
        if negative {
            (format!("-{text}"), Prec::Neg)
        } else {
            (text, Prec::Product)
        }
    }
}

/// One line per output (`name = value` when labeled) followed by one line per
/// diagnostic.
pub fn render_cell_result(r: &CellResult) -> String {
    let mut out = String::new();
    for o in &r.outputs {
        let value = render_expr(&o.value, Style::Display);
        match &o.label {
            Some(name) => out.push_str(&format!("{} = {value}\n", symbol_text(name))),
            None => out.push_str(&format!("{value}\n")),
        }
    }
    for d in &r.diagnostics {
        let severity = match d.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        out.push_str(&format!(
            "{severity}[{}] at {}..{}: {}\n",
            d.code, d.span.start, d.span.end, d.message
        ));
    }
    out
}

/// Mathpar source for a parsed document. Passive text is reproduced verbatim.
pub fn render_document(doc: &Document) -> String {
    let mut parts = Vec::with_capacity(doc.segments.len());
    for seg in &doc.segments {
        match seg {
            Segment::Passive(p) => parts.push(p.raw.clone()),
            Segment::Active(stmts) => {
                let text: Vec<String> = stmts
                    .iter()
                    .map(|s| match &s.kind {
                        StatementKind::Assignment { name, rhs } => format!(
                            "{} = {};",
                            symbol_text(name),
                            render_expr(rhs, Style::Source)
                        ),
                        StatementKind::Bare(e) => format!("{};", render_expr(e, Style::Source)),
                        StatementKind::Print(args) => format!(
                            "\\print({});",
                            args.iter()
                                .map(|a| render_expr(a, Style::Source))
                                .collect::<Vec<_>>()
                                .join(", ")
                        ),
                    })
                    .collect();
                parts.push(text.join(" "));
            }
        }
    }
    parts.join("\n")
}

/// Display text of a symbol name, e.g. `c_v` or `\lambda`.
pub fn render_symbol(name: &SymbolName) -> String {
    symbol_text(name)
}
