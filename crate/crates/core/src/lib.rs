//! Mathpar: a small language for mixing prose with exact symbolic
//! computation.
//!
//! Source text alternates passive prose (in double quotes) with active
//! statements. [`Env`] evaluates cells of such text; values are kept in a
//! canonical form built from exact rationals, so two equal expressions are
//! structurally identical after [`canonicalize`].
//!
//! ```
//! use mathpar::{render_expr, Env, Style};
//!
//! let mut env = Env::new();
//! let r = env.eval_cell("a = 2; f = a \\cos(2x); g = \\int(f) d x;");
//! assert_eq!(render_expr(&r.outputs[0].value, Style::Display), "\\sin(2x)");
//! ```

pub mod calculus;
pub mod canon;
pub mod cells;
pub mod error;
pub mod eval;
pub mod expr;
pub mod number;
pub mod render;
pub mod report;
pub mod sample;
pub mod session;
pub mod syntax;
pub mod units;

/// Exact scalar used by the symbolic core.
pub type Rational = num_rational::BigRational;
/// Default floating-point scalar for numeric evaluation.
pub type Real = f64;

pub use calculus::{approximate, differentiate, integrate, solve_linear, SolveResult};
pub use canon::{canonicalize, expr_equals, substitute};
pub use cells::{join_cells, split_cells};
pub use error::{MathError, SyntaxError};
pub use eval::{numeric_eval, UnitPolicy};
pub use expr::{Expr, FuncKind, SymbolName, UnitSymbol};
pub use number::Number;
pub use render::{render_cell_result, render_document, render_expr, render_symbol, Style};
pub use report::CellReport;
pub use session::{CellResult, Diagnostic, Env, Output, Severity};
pub use syntax::{parse_source, Document, Span};
pub use units::{reduce_units, split_quantity, UnitMonomial, UnitRegistry};

/// Parses one expression with the default unit registry.
pub fn parse_expr(source: &str) -> Result<Expr, SyntaxError> {
    let tokens = syntax::tokenize(source)?;
    syntax::parse_expression(&tokens)
}

#[cfg(test)]
pub(crate) fn parse_expression_str(source: &str) -> Expr {
    parse_expr(source).unwrap_or_else(|e| panic!("{source:?}: {e}"))
}
