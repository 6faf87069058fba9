//! Floating-point evaluation, generic over the float type.

use std::collections::HashMap;

use num_traits::{Float, FromPrimitive};

use crate::error::MathError;
use crate::expr::{Expr, FuncKind, SymbolName};
use crate::number::Number;

/// How unit symbols are treated during numeric evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum UnitPolicy {
    /// A unit symbol is an error.
    #[default]
    Reject,
    /// Every unit evaluates to one.
    AsOne,
}

fn number_to<F: Float + FromPrimitive>(n: &Number) -> F {
    F::from_f64(n.to_f64()).unwrap_or_else(F::nan)
}

fn checked<F: Float>(value: F, what: &str) -> Result<F, MathError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(MathError::DomainError(format!("{what} is undefined here")))
    }
}

/// Evaluates `e` with every free symbol taken from `bindings`.
pub fn numeric_eval<F>(
    e: &Expr,
    bindings: &HashMap<SymbolName, F>,
    units: UnitPolicy,
) -> Result<F, MathError>
where
    F: Float + FromPrimitive,
{
    let ev = |x: &Expr| numeric_eval(x, bindings, units);
    match e {
        Expr::Number(n) => Ok(number_to(n)),
        Expr::Symbol(s) => bindings
            .get(s)
            .copied()
            .ok_or_else(|| MathError::UnboundSymbol(s.to_string())),
        Expr::Unit(u) => match units {
            UnitPolicy::AsOne => Ok(F::one()),
            UnitPolicy::Reject => Err(MathError::UnboundSymbol(u.name.clone())),
        },
        Expr::Add(terms) => terms.iter().try_fold(F::zero(), |acc, t| Ok(acc + ev(t)?)),
        Expr::Mul(c, factors) => {
            let mut acc: F = number_to(c);
            for (base, k) in factors {
                let b = ev(base)?;
                let k = i32::try_from(*k).map_err(|_| MathError::ExponentTooLarge(*k))?;
                acc = acc * checked(b.powi(k), "power")?;
            }
            checked(acc, "product")
        }
        Expr::Pow(b, x) => {
            let b = ev(b)?;
            let x = ev(x)?;
            checked(b.powf(x), "power")
        }
        Expr::Func(kind, arg) => {
            let a = ev(arg)?;
            match kind {
                FuncKind::Cos => Ok(a.cos()),
                FuncKind::Sin => Ok(a.sin()),
                FuncKind::Exp => checked(a.exp(), "exp"),
                FuncKind::Ln if a <= F::zero() => {
                    Err(MathError::DomainError("ln of a non-positive value".into()))
                }
                FuncKind::Ln => Ok(a.ln()),
            }
        }
        Expr::Integral(..) | Expr::Derivative(..) | Expr::Solve(_) | Expr::Value(_) | Expr::Equation(..) => {
            Err(MathError::UnsupportedNode(e.to_string()))
        }
    }
}
