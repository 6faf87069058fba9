//! Differentiation, indefinite integration, linear solving and numeric
//! approximation.

use std::collections::HashMap;

use num_traits::FromPrimitive;

use crate::canon::{self, add, canonicalize, mul, mul_powers, neg, powi};
use crate::error::MathError;
use crate::eval::{numeric_eval, UnitPolicy};
use crate::expr::{Expr, FuncKind, SymbolName};
use crate::number::Number;
use crate::units::{recombine, split_quantity};
use crate::Rational;

type Result<T> = std::result::Result<T, MathError>;

/// Decimal places used by `\value` unless configured otherwise.
pub const DEFAULT_PRECISION: u32 = 2;

fn is_unevaluated(e: &Expr) -> bool {
    matches!(
        e,
        Expr::Integral(..) | Expr::Derivative(..) | Expr::Solve(_) | Expr::Value(_) | Expr::Equation(..)
    )
}

/// Derivative of `body` with respect to `var`. Units and other symbols are
/// constants.
pub fn differentiate(body: &Expr, var: &SymbolName) -> Result<Expr> {
    if let Some(bad) = first_unevaluated(body) {
        return Err(MathError::UnsupportedNode(bad.to_string()));
    }
    derive(&canonicalize(body)?, var)
}

fn first_unevaluated(e: &Expr) -> Option<Expr> {
    let mut found = None;
    if e.any_node(&is_unevaluated) {
        // Report the outermost offending node.
        found = find(e);
    }
    found
}

fn find(e: &Expr) -> Option<Expr> {
    if is_unevaluated(e) {
        return Some(e.clone());
    }
    match e {
        Expr::Add(ts) => ts.iter().find_map(find),
        Expr::Mul(_, fs) => fs.iter().find_map(|(b, _)| find(b)),
        Expr::Pow(a, b) => find(a).or_else(|| find(b)),
        Expr::Func(_, a) => find(a),
        _ => None,
    }
}

fn derive(e: &Expr, var: &SymbolName) -> Result<Expr> {
    if e.is_free_of(var) {
        return Ok(Expr::int(0));
    }
    match e {
        Expr::Symbol(_) => Ok(Expr::int(1)),
        Expr::Add(terms) => add(terms.iter().map(|t| derive(t, var)).collect::<Result<_>>()?),
        Expr::Mul(coeff, factors) => {
            let mut terms = Vec::new();
            for (i, (base, k)) in factors.iter().enumerate() {
                if base.is_free_of(var) {
                    continue;
                }
                let mut rest = factors.clone();
                rest[i].1 = k - 1;
                let outer = mul_powers(coeff.mul(&Number::from_i64(*k)), rest)?;
                terms.push(mul(vec![outer, derive(base, var)?])?);
            }
            add(terms)
        }
        Expr::Pow(base, exp) if exp.is_free_of(var) => {
            let lowered = canon::pow((**base).clone(), add(vec![(**exp).clone(), Expr::int(-1)])?)?;
            mul(vec![(**exp).clone(), lowered, derive(base, var)?])
        }
        Expr::Pow(base, exp) => {
            // d(b^x) = b^x (x' ln b + x b' / b)
            let ln_b = canon::func(FuncKind::Ln, (**base).clone());
            let inner = add(vec![
                mul(vec![derive(exp, var)?, ln_b])?,
                mul(vec![(**exp).clone(), derive(base, var)?, powi((**base).clone(), -1)?])?,
            ])?;
            mul(vec![e.clone(), inner])
        }
        Expr::Func(kind, arg) => {
            let du = derive(arg, var)?;
            let outer = match kind {
                FuncKind::Cos => neg(canon::func(FuncKind::Sin, (**arg).clone()))?,
                FuncKind::Sin => canon::func(FuncKind::Cos, (**arg).clone()),
                FuncKind::Exp => e.clone(),
                FuncKind::Ln => powi((**arg).clone(), -1)?,
            };
            mul(vec![outer, du])
        }
        other => Err(MathError::UnsupportedNode(other.to_string())),
    }
}

/// Antiderivative without the integration constant.
///
/// Each term of the canonical integrand must be `c`, `c·v^n`, `c·v^r` for
/// a rational `r ≠ -1`, `c/v`, or `c·f(a·v + b)` with `f` one of cos, sin,
/// exp, where `c`, `a`, `b` do not mention `v`.
pub fn integrate(body: &Expr, var: &SymbolName) -> Result<Expr> {
    if let Some(bad) = first_unevaluated(body) {
        return Err(MathError::UnsupportedNode(bad.to_string()));
    }
    let body = canonicalize(body)?;
    let terms = match body {
        Expr::Add(terms) => terms,
        other => vec![other],
    };
    let parts = terms
        .iter()
        .map(|t| integrate_term(t, var))
        .collect::<Result<Vec<_>>>()?;
    add(parts)
}

fn integrate_term(term: &Expr, var: &SymbolName) -> Result<Expr> {
    let v = Expr::Symbol(var.clone());
    if term.is_free_of(var) {
        return mul(vec![term.clone(), v]);
    }
    let unsupported = || MathError::UnsupportedIntegrand(term.to_string());
    let (coeff, factors) = match term {
        Expr::Mul(c, fs) => (c.clone(), fs.clone()),
        other => (Number::one(), vec![(other.clone(), 1)]),
    };
    let (free, dependent): (Vec<_>, Vec<_>) = factors.into_iter().partition(|(b, _)| b.is_free_of(var));
    let [(base, k)] = dependent.as_slice() else {
        return Err(unsupported());
    };
    let constant = mul_powers(coeff, free)?;

    match (base, *k) {
        (Expr::Symbol(_), -1) => mul(vec![constant, canon::func(FuncKind::Ln, v)]),
        (Expr::Symbol(_), n) => {
            let m = n.checked_add(1).ok_or(MathError::ExponentTooLarge(n))?;
            mul(vec![constant, Expr::ratio(1, m), powi(v, m)?])
        }
        (Expr::Pow(b, exp), 1) if **b == v => {
            let Expr::Number(r) = &**exp else {
                return Err(unsupported());
            };
            let r1 = r.add(&Number::one());
            mul(vec![
                constant,
                Expr::Number(r1.recip()?),
                canon::pow(v, Expr::Number(r1))?,
            ])
        }
        (Expr::Func(kind, arg), 1) if *kind != FuncKind::Ln => {
            let (slope, _) = linear_coefficients(arg, var).map_err(|_| unsupported())?;
            if slope.is_zero() {
                return Err(unsupported());
            }
            let inv = powi(slope, -1)?;
            let anti = match kind {
                FuncKind::Cos => canon::func(FuncKind::Sin, (**arg).clone()),
                FuncKind::Sin => neg(canon::func(FuncKind::Cos, (**arg).clone()))?,
                _ => base.clone(),
            };
            mul(vec![constant, inv, anti])
        }
        _ => Err(unsupported()),
    }
}

/// Writes a canonical expression as `a·var + b` with `a`, `b` free of `var`.
pub fn linear_coefficients(e: &Expr, var: &SymbolName) -> Result<(Expr, Expr)> {
    let nonlinear = || MathError::NonlinearEquation(var.to_string());
    let terms: Vec<Expr> = match e {
        Expr::Add(terms) => terms.clone(),
        other => vec![other.clone()],
    };
    let mut slope = Vec::new();
    let mut offset = Vec::new();
    for t in terms {
        if t.is_free_of(var) {
            offset.push(t);
            continue;
        }
        match &t {
            Expr::Symbol(s) if s == var => slope.push(Expr::int(1)),
            Expr::Mul(c, fs) => {
                let (with_var, rest): (Vec<_>, Vec<_>) = fs.iter().cloned().partition(|(b, _)| !b.is_free_of(var));
                match with_var.as_slice() {
                    [(Expr::Symbol(s), 1)] if s == var => slope.push(mul_powers(c.clone(), rest)?),
                    _ => return Err(nonlinear()),
                }
            }
            _ => return Err(nonlinear()),
        }
    }
    Ok((add(slope)?, add(offset)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub unknown: SymbolName,
    pub value: Expr,
}

/// Solves `lhs = rhs` for `unknown`, which must occur linearly.
pub fn solve_linear(lhs: &Expr, rhs: &Expr, unknown: &SymbolName) -> Result<SolveResult> {
    let diff = canon::sub(canonicalize(lhs)?, canonicalize(rhs)?)?;
    let (slope, offset) = linear_coefficients(&diff, unknown)?;
    if slope.is_zero() {
        return Err(MathError::DegenerateEquation(unknown.to_string()));
    }
    let value = mul(vec![neg(offset)?, powi(slope, -1)?])?;
    Ok(SolveResult {
        unknown: unknown.clone(),
        value,
    })
}

/// Replaces the numeric part of a quantity by a decimal with `precision`
/// places, keeping its units.
pub fn approximate(e: &Expr, precision: u32) -> Result<Expr> {
    let e = canonicalize(e)?;
    if let Some(free) = e.symbols().into_iter().next() {
        return Err(MathError::FreeVariable(free.to_string()));
    }
    if let Some(bad) = first_unevaluated(&e) {
        return Err(MathError::UnsupportedNode(bad.to_string()));
    }
    let (numeric, units) = split_quantity(&e)?;
    let exact = match &numeric {
        Expr::Number(n) => n.clone(),
        other => {
            let value: f64 = numeric_eval(other, &HashMap::new(), UnitPolicy::Reject)?;
            let r = Rational::from_f64(value)
                .ok_or_else(|| MathError::DomainError(format!("{other} is not a finite number")))?;
            Number::new(r)
        }
    };
    recombine(Expr::Number(exact.round_to(precision)), &units)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{expr_equals, parse_expression_str as p};

    fn x() -> SymbolName {
        SymbolName::new("x")
    }

    #[test]
    fn derivative_of_sine() {
        let d = differentiate(&p("\\sin(2x)"), &x()).unwrap();
        assert!(expr_equals(&d, &p("2\\cos(2x)")));
    }

    #[test]
    fn constants_differentiate_to_zero() {
        assert_eq!(differentiate(&p("c"), &x()).unwrap(), Expr::int(0));
        assert_eq!(differentiate(&p("5 kg"), &x()).unwrap(), Expr::int(0));
    }

    #[test]
    fn product_quotient_chain() {
        let d = differentiate(&p("x^2 \\ln(x)"), &x()).unwrap();
        assert!(expr_equals(&d, &p("2x \\ln(x) + x")));
        let d = differentiate(&p("1/(x + 1)"), &x()).unwrap();
        assert!(expr_equals(&d, &p("-1/(x+1)^2")));
        let d = differentiate(&p("\\exp(x^2)"), &x()).unwrap();
        assert!(expr_equals(&d, &p("2x \\exp(x^2)")));
        let d = differentiate(&p("x^(1/2)"), &x()).unwrap();
        assert!(expr_equals(&d, &p("1/2 x^(-1/2)")));
    }

    #[test]
    fn unevaluated_nodes_are_rejected() {
        let e = p("\\int(x) d x");
        assert!(matches!(differentiate(&e, &x()), Err(MathError::UnsupportedNode(_))));
    }

    #[test]
    fn integral_of_cosine() {
        let g = integrate(&p("2\\cos(2x)"), &x()).unwrap();
        assert_eq!(g, canonicalize(&p("\\sin(2x)")).unwrap());
    }

    #[test]
    fn integral_table() {
        assert_eq!(integrate(&Expr::int(0), &x()).unwrap(), Expr::int(0));
        let cases = [
            ("3", "3x"),
            ("x", "1/2 x^2"),
            ("x^-3", "-1/2 x^-2"),
            ("5/x", "5 \\ln(x)"),
            ("x^(1/2)", "2/3 x^(3/2)"),
            ("\\sin(3x + 1)", "-1/3 \\cos(3x + 1)"),
            ("a \\exp(k x)", "a/k \\exp(k x)"),
            ("2 kg x", "kg x^2"),
        ];
        for (f, expected) in cases {
            let got = integrate(&p(f), &x()).unwrap();
            assert!(expr_equals(&got, &p(expected)), "{f}: got {got}");
        }
    }

    #[test]
    fn integral_rejects_outside_class() {
        for f in ["x \\sin(x)", "\\ln(x)", "\\cos(x^2)", "1/(x+1)"] {
            assert!(
                matches!(integrate(&p(f), &x()), Err(MathError::UnsupportedIntegrand(_))),
                "{f}"
            );
        }
    }

    #[test]
    fn solve_examples() {
        let r = solve_linear(&p("x"), &p("5"), &x()).unwrap();
        assert_eq!(r.value, Expr::int(5));
        let r = solve_linear(&p("2x + 3"), &p("7"), &x()).unwrap();
        assert_eq!(r.value, Expr::int(2));
    }

    #[test]
    fn solve_heat_balance() {
        let lhs = p("20000 kJ");
        let rhs = p("7710 kJ + (10 kg - x) 2300 kJ/kg");
        let r = solve_linear(&lhs, &rhs, &x()).unwrap();
        assert_eq!(r.value, canonicalize(&p("10710/2300 kg")).unwrap());
        assert_eq!(r.value, canonicalize(&p("1071/230 kg")).unwrap());
    }

    #[test]
    fn solve_errors() {
        assert!(matches!(
            solve_linear(&p("x^2"), &p("4"), &x()),
            Err(MathError::NonlinearEquation(_))
        ));
        assert!(matches!(
            solve_linear(&p("\\sin(x)"), &p("0"), &x()),
            Err(MathError::NonlinearEquation(_))
        ));
        assert!(matches!(
            solve_linear(&p("x + 1"), &p("x"), &x()),
            Err(MathError::DegenerateEquation(_))
        ));
    }

    #[test]
    fn approximations() {
        let got = approximate(&p("1071/230 kg"), 2).unwrap();
        assert_eq!(crate::render::render_expr(&got, crate::render::Style::Display), "4.66 \\cdot kg");
        let two = approximate(&Expr::int(2), 2).unwrap();
        assert_eq!(crate::render::render_expr(&two, crate::render::Style::Display), "2.00");
        let s = approximate(&p("\\sin(2)"), 2).unwrap();
        assert_eq!(crate::render::render_expr(&s, crate::render::Style::Display), "0.91");
        assert!(matches!(approximate(&p("x kg"), 2), Err(MathError::FreeVariable(_))));
        assert!(matches!(approximate(&p("2 kJ + 3 kg"), 2), Err(MathError::MixedUnitsInSum(_))));
        assert!(matches!(approximate(&p("\\ln(0 - 1)"), 2), Err(MathError::DomainError(_))));
    }
}
