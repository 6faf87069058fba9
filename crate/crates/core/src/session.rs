//! The evaluation engine.
//!
//! An [`Env`] holds the bindings made so far. Cells are evaluated one at a
//! time against it; assignments store computed values, never formulas.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::calculus::{self, DEFAULT_PRECISION};
use crate::canon;
use crate::cells::split_cells;
use crate::error::{MathError, SyntaxError};
use crate::expr::{Expr, FuncKind, SymbolName, DEGREE_CELSIUS};
use crate::syntax::{parse_source, Span, StatementKind};
use crate::units::{self, UnitRegistry};

#[derive(Clone, Debug, PartialEq)]
pub struct Env {
    bindings: IndexMap<SymbolName, Expr>,
    unknown: SymbolName,
    precision: u32,
    units: UnitRegistry,
    evaluations: u64,
}

impl Default for Env {
    fn default() -> Self {
        Env {
            bindings: IndexMap::new(),
            unknown: SymbolName::new("x"),
            precision: DEFAULT_PRECISION,
            units: UnitRegistry::default(),
            evaluations: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub span: Span,
    pub code: String,
    pub message: String,
    pub severity: Severity,
}

impl Diagnostic {
    fn from_syntax(err: &SyntaxError) -> Self {
        Diagnostic {
            span: err.span(),
            code: err.code().to_string(),
            message: err.to_string(),
            severity: Severity::Error,
        }
    }

    fn from_math(err: &MathError, span: Span) -> Self {
        Diagnostic {
            span,
            code: err.code().to_string(),
            message: err.to_string(),
            severity: Severity::Error,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub label: Option<SymbolName>,
    pub value: Expr,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellResult {
    pub outputs: Vec<Output>,
    pub diagnostics: Vec<Diagnostic>,
}

impl CellResult {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(|d| d.severity == Severity::Error)
    }
}

impl Env {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &SymbolName) -> Option<&Expr> {
        self.bindings.get(name)
    }

    /// Bindings in first-assignment order.
    pub fn bindings(&self) -> impl Iterator<Item = (&SymbolName, &Expr)> {
        self.bindings.iter()
    }

    pub fn binding_count(&self) -> usize {
        self.bindings.len()
    }

    pub fn unknown(&self) -> &SymbolName {
        &self.unknown
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn units(&self) -> &UnitRegistry {
        &self.units
    }

    /// Number of top-level expression evaluations performed so far.
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    /// Chooses the variable `\solve` solves for.
    pub fn set_unknown(&mut self, name: SymbolName) -> Result<(), MathError> {
        if self.units.unit_for(&name).is_some() || name.base == DEGREE_CELSIUS {
            return Err(MathError::unit_as_unknown(&name));
        }
        self.unknown = name;
        Ok(())
    }

    pub fn set_precision(&mut self, places: u32) {
        self.precision = places;
    }

    pub fn register_unit(&mut self, name: &str, display: Option<&str>) -> Result<(), String> {
        self.units.register(name, display).map(|_| ())
    }

    /// Forgets every binding and setting.
    pub fn reset(&mut self) {
        *self = Env::default();
    }

    pub fn eval_cell(&mut self, source: &str) -> CellResult {
        let mut result = CellResult::default();
        let doc = match parse_source(source, &self.units) {
            Ok(doc) => doc,
            Err(err) => {
                result.diagnostics.push(Diagnostic::from_syntax(&err));
                return result;
            }
        };
        let has_print = doc.has_print();
        let mut last = None;

        for stmt in doc.statements() {
            let executed = match &stmt.kind {
                StatementKind::Assignment { name, rhs } => self.assign(name, rhs).map(Some),
                StatementKind::Bare(e) => self.evaluate(e).map(Some),
                StatementKind::Print(args) => self.print(args, &mut result).map(|_| None),
            };
            match executed {
                Ok(Some(value)) => last = Some(value),
                Ok(None) => {}
                Err(err) => {
                    result.diagnostics.push(Diagnostic::from_math(&err, stmt.span));
                    return result;
                }
            }
        }

        if !has_print {
            if let Some(value) = last {
                result.outputs.push(Output { label: None, value });
            }
        }
        result
    }

    /// Evaluates every cell of a document in order.
    pub fn eval_document(&mut self, text: &str) -> Vec<CellResult> {
        split_cells(text)
            .iter()
            .map(|cell| self.eval_cell(cell))
            .collect()
    }

    fn assign(&mut self, name: &SymbolName, rhs: &Expr) -> Result<Expr, MathError> {
        if self.units.unit_for(name).is_some() {
            return Err(MathError::AssignToUnit(name.to_string()));
        }
        let value = self.evaluate(rhs)?;
        self.bindings.insert(name.clone(), value.clone());
        Ok(value)
    }

    fn print(&mut self, args: &[Expr], result: &mut CellResult) -> Result<(), MathError> {
        let mut outputs = Vec::with_capacity(args.len());
        for arg in args {
            let label = match arg {
                Expr::Symbol(s) => Some(s.clone()),
                _ => None,
            };
            outputs.push(Output {
                label,
                value: self.evaluate(arg)?,
            });
        }
        result.outputs.extend(outputs);
        Ok(())
    }

    /// Evaluates an expression against the current bindings.
    pub fn evaluate(&mut self, e: &Expr) -> Result<Expr, MathError> {
        self.evaluations += 1;
        let value = self.eval_node(e, &[])?;
        units::check_sums(&value)?;
        Ok(value)
    }

    fn lookup(&self, name: &SymbolName, hidden: &[SymbolName]) -> Expr {
        if !hidden.contains(name) {
            if let Some(v) = self.bindings.get(name) {
                return v.clone();
            }
        }
        match self.units.unit_for(name) {
            Some(u) => Expr::Unit(u.clone()),
            None => Expr::Symbol(name.clone()),
        }
    }

    fn eval_node(&self, e: &Expr, hidden: &[SymbolName]) -> Result<Expr, MathError> {
        let ev = |x: &Expr| self.eval_node(x, hidden);
        let hiding = |v: &SymbolName| {
            let mut h = hidden.to_vec();
            h.push(v.clone());
            h
        };
        match e {
            Expr::Number(_) | Expr::Unit(_) => Ok(e.clone()),
            Expr::Symbol(s) => Ok(self.lookup(s, hidden)),
            Expr::Add(terms) => canon::add(terms.iter().map(ev).collect::<Result<_, _>>()?),
            Expr::Mul(c, factors) => canon::mul_powers(
                c.clone(),
                factors
                    .iter()
                    .map(|(b, k)| Ok((ev(b)?, *k)))
                    .collect::<Result<_, MathError>>()?,
            ),
            Expr::Pow(b, x) => canon::pow(ev(b)?, ev(x)?),
            Expr::Func(kind, arg) => {
                let arg = ev(arg)?;
                match (kind, &arg) {
                    (FuncKind::Ln, Expr::Number(n)) if n.is_zero() || n.is_negative() => {
                        Err(MathError::DomainError(format!("\\ln({n})")))
                    }
                    _ => Ok(canon::func(*kind, arg)),
                }
            }
            Expr::Integral(body, v) => {
                let body = self.eval_node(body, &hiding(v))?;
                calculus::integrate(&body, v)
            }
            Expr::Derivative(body, v) => {
                let body = self.eval_node(body, &hiding(v))?;
                calculus::differentiate(&body, v)
            }
            Expr::Solve(eq) => {
                let Expr::Equation(lhs, rhs) = &**eq else {
                    return Err(MathError::StrayEquation);
                };
                let h = hiding(&self.unknown);
                let lhs = self.eval_node(lhs, &h)?;
                let rhs = self.eval_node(rhs, &h)?;
                Ok(calculus::solve_linear(&lhs, &rhs, &self.unknown)?.value)
            }
            Expr::Value(arg) => calculus::approximate(&ev(arg)?, self.precision),
            Expr::Equation(..) => Err(MathError::StrayEquation),
        }
    }
}

/// Functional form of [`Env::eval_cell`].
pub fn eval_cell(env: &Env, source: &str) -> (Env, CellResult) {
    let mut next = env.clone();
    let result = next.eval_cell(source);
    (next, result)
}

/// Functional form of [`Env::eval_document`].
pub fn eval_document(env: &Env, text: &str) -> (Env, Vec<CellResult>) {
    let mut next = env.clone();
    let results = next.eval_document(text);
    (next, results)
}
