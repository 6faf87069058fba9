//! The expression tree shared by the parser, the simplifier and the evaluator.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::number::Number;

/// Greek letters accepted as `\name` symbols.
pub const GREEK_LETTERS: &[&str] = &[
    "alpha", "beta", "gamma", "delta", "epsilon", "varepsilon", "zeta", "eta", "theta", "vartheta",
    "iota", "kappa", "lambda", "mu", "nu", "xi", "pi", "rho", "sigma", "tau", "upsilon", "phi",
    "varphi", "chi", "psi", "omega", "Gamma", "Delta", "Theta", "Lambda", "Xi", "Pi", "Sigma",
    "Upsilon", "Phi", "Psi", "Omega",
];

pub fn is_greek(name: &str) -> bool {
    GREEK_LETTERS.contains(&name)
}

/// A variable name such as `x`, `c_v`, `q_1` or `\lambda`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SymbolName {
    pub base: String,
    pub subscript: Option<String>,
}

impl SymbolName {
    pub fn new(base: impl Into<String>) -> Self {
        SymbolName {
            base: base.into(),
            subscript: None,
        }
    }

    pub fn with_subscript(base: impl Into<String>, subscript: impl Into<String>) -> Self {
        SymbolName {
            base: base.into(),
            subscript: Some(subscript.into()),
        }
    }

    /// Parses the plain spelling used on command lines: `x`, `c_v`, `lambda`.
    pub fn parse(text: &str) -> Option<Self> {
        let text = text.trim().trim_start_matches('\\');
        let (base, sub) = match text.split_once('_') {
            Some((b, s)) => (b, Some(s.trim_matches(|c| c == '{' || c == '}'))),
            None => (text, None),
        };
        if base.is_empty() || !base.chars().all(|c| c.is_ascii_alphabetic()) {
            return None;
        }
        match sub {
            Some(s) if s.is_empty() || !s.chars().all(|c| c.is_ascii_alphanumeric()) => None,
            Some(s) => Some(SymbolName::with_subscript(base, s)),
            None => Some(SymbolName::new(base)),
        }
    }
}

impl fmt::Display for SymbolName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.base)?;
        if let Some(sub) = &self.subscript {
            write!(f, "_{sub}")?;
        }
        Ok(())
    }
}

/// A physical unit used as a literal multiplicative factor.
///
/// Identity is the name alone; `display` is how the unit is typeset.
#[derive(Clone, Debug)]
pub struct UnitSymbol {
    pub name: String,
    pub display: String,
}

impl UnitSymbol {
    pub fn new(name: impl Into<String>, display: impl Into<String>) -> Self {
        UnitSymbol {
            name: name.into(),
            display: display.into(),
        }
    }

    pub fn plain(name: &str) -> Self {
        UnitSymbol::new(name, name)
    }

    /// The degree Celsius unit written `\degreeC`.
    pub fn degree_celsius() -> Self {
        UnitSymbol::new(DEGREE_CELSIUS, "C^{o}")
    }

    pub fn is_command(&self) -> bool {
        self.name == DEGREE_CELSIUS
    }
}

pub const DEGREE_CELSIUS: &str = "degreeC";

impl PartialEq for UnitSymbol {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Eq for UnitSymbol {}

impl PartialOrd for UnitSymbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Plain units sort by name, before command units such as `\degreeC`.
impl Ord for UnitSymbol {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.is_command(), &self.name).cmp(&(other.is_command(), &other.name))
    }
}

impl std::hash::Hash for UnitSymbol {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.name.hash(state);
    }
}

impl fmt::Display for UnitSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FuncKind {
    Cos,
    Sin,
    Exp,
    Ln,
}

impl FuncKind {
    pub fn name(self) -> &'static str {
        match self {
            FuncKind::Cos => "cos",
            FuncKind::Sin => "sin",
            FuncKind::Exp => "exp",
            FuncKind::Ln => "ln",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "cos" => Some(FuncKind::Cos),
            "sin" => Some(FuncKind::Sin),
            "exp" => Some(FuncKind::Exp),
            "ln" => Some(FuncKind::Ln),
            _ => None,
        }
    }
}

/// Symbolic expression.
///
/// The same type holds both freshly parsed trees and canonical forms; see
/// [`crate::canonicalize`] for the invariants a canonical tree satisfies.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Number(Number),
    Symbol(SymbolName),
    Unit(UnitSymbol),
    Add(Vec<Expr>),
    /// `coeff * product(base^exp)`.
    Mul(Number, Vec<(Expr, i64)>),
    /// Power with a non-integer or symbolic exponent.
    Pow(Box<Expr>, Box<Expr>),
    Func(FuncKind, Box<Expr>),
    Integral(Box<Expr>, SymbolName),
    Derivative(Box<Expr>, SymbolName),
    /// `\solve(...)`; the argument is an [`Expr::Equation`].
    Solve(Box<Expr>),
    /// `\value(...)`.
    Value(Box<Expr>),
    Equation(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Number(Number::from_i64(n))
    }

    pub fn ratio(num: i64, den: i64) -> Expr {
        Expr::Number(Number::ratio(num, den))
    }

    pub fn sym(name: &str) -> Expr {
        Expr::Symbol(SymbolName::parse(name).unwrap_or_else(|| SymbolName::new(name)))
    }

    pub fn unit(name: &str) -> Expr {
        if name == DEGREE_CELSIUS {
            Expr::Unit(UnitSymbol::degree_celsius())
        } else {
            Expr::Unit(UnitSymbol::plain(name))
        }
    }

    pub fn func(kind: FuncKind, arg: Expr) -> Expr {
        Expr::Func(kind, Box::new(arg))
    }

    /// Raw product of factors, each to the first power.
    pub fn product(factors: Vec<Expr>) -> Expr {
        Expr::Mul(Number::one(), factors.into_iter().map(|f| (f, 1)).collect())
    }

    pub fn as_number(&self) -> Option<&Number> {
        match self {
            Expr::Number(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Number(n) if n.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Number(n) if n.is_one())
    }

    /// True when `var` does not occur free in the expression.
    pub fn is_free_of(&self, var: &SymbolName) -> bool {
        match self {
            Expr::Number(_) | Expr::Unit(_) => true,
            Expr::Symbol(s) => s != var,
            Expr::Add(terms) => terms.iter().all(|t| t.is_free_of(var)),
            Expr::Mul(_, factors) => factors.iter().all(|(b, _)| b.is_free_of(var)),
            Expr::Pow(b, e) | Expr::Equation(b, e) => b.is_free_of(var) && e.is_free_of(var),
            Expr::Func(_, a) | Expr::Solve(a) | Expr::Value(a) => a.is_free_of(var),
            Expr::Integral(body, v) | Expr::Derivative(body, v) => v == var || body.is_free_of(var),
        }
    }

    /// Free variable symbols (units excluded).
    pub fn symbols(&self) -> BTreeSet<SymbolName> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<SymbolName>) {
        match self {
            Expr::Number(_) | Expr::Unit(_) => {}
            Expr::Symbol(s) => {
                out.insert(s.clone());
            }
            Expr::Add(terms) => terms.iter().for_each(|t| t.collect_symbols(out)),
            Expr::Mul(_, factors) => factors.iter().for_each(|(b, _)| b.collect_symbols(out)),
            Expr::Pow(a, b) | Expr::Equation(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
            Expr::Func(_, a) | Expr::Solve(a) | Expr::Value(a) => a.collect_symbols(out),
            Expr::Integral(body, v) | Expr::Derivative(body, v) => {
                let mut inner = BTreeSet::new();
                body.collect_symbols(&mut inner);
                inner.remove(v);
                out.extend(inner);
            }
        }
    }

    /// True if any node satisfies `pred`.
    pub fn any_node(&self, pred: &dyn Fn(&Expr) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Expr::Number(_) | Expr::Symbol(_) | Expr::Unit(_) => false,
            Expr::Add(terms) => terms.iter().any(|t| t.any_node(pred)),
            Expr::Mul(_, factors) => factors.iter().any(|(b, _)| b.any_node(pred)),
            Expr::Pow(a, b) | Expr::Equation(a, b) => a.any_node(pred) || b.any_node(pred),
            Expr::Func(_, a)
            | Expr::Solve(a)
            | Expr::Value(a)
            | Expr::Integral(a, _)
            | Expr::Derivative(a, _) => a.any_node(pred),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Expr::Number(_) => 0,
            Expr::Symbol(_) => 1,
            Expr::Func(..) => 2,
            Expr::Pow(..) => 3,
            Expr::Add(_) => 4,
            Expr::Mul(..) => 5,
            Expr::Integral(..) => 6,
            Expr::Derivative(..) => 7,
            Expr::Solve(_) => 8,
            Expr::Value(_) => 9,
            Expr::Equation(..) => 10,
            Expr::Unit(_) => 11,
        }
    }
}

impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order used to sort factors; unit symbols come after everything else.
impl Ord for Expr {
    fn cmp(&self, other: &Self) -> Ordering {
        use Expr::*;
        match (self, other) {
            (Number(a), Number(b)) => a.cmp(b),
            (Symbol(a), Symbol(b)) => a.cmp(b),
            (Unit(a), Unit(b)) => a.cmp(b),
            (Add(a), Add(b)) => a.cmp(b),
            (Mul(ca, fa), Mul(cb, fb)) => fa.cmp(fb).then_with(|| ca.cmp(cb)),
            (Pow(a1, a2), Pow(b1, b2)) | (Equation(a1, a2), Equation(b1, b2)) => {
                a1.cmp(b1).then_with(|| a2.cmp(b2))
            }
            (Func(ka, a), Func(kb, b)) => ka.cmp(kb).then_with(|| a.cmp(b)),
            (Integral(a, va), Integral(b, vb)) | (Derivative(a, va), Derivative(b, vb)) => {
                va.cmp(vb).then_with(|| a.cmp(b))
            }
            (Solve(a), Solve(b)) | (Value(a), Value(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl From<Number> for Expr {
    fn from(n: Number) -> Self {
        Expr::Number(n)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<SymbolName> for Expr {
    fn from(s: SymbolName) -> Self {
        Expr::Symbol(s)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::render::render_expr(self, crate::render::Style::Source))
    }
}
