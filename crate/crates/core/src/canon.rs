//! Canonical simplification.
//!
//! A canonical expression satisfies:
//!
//! * `Add` has at least two terms, none of them `Add` or zero, no two terms
//!   share a monomial, and terms are sorted by [`cmp_monomial`] with the
//!   constant last.
//! * `Mul` has a nonzero coefficient and a non-empty factor list sorted by
//!   base with unique bases and nonzero exponents. No base is a `Number` or a
//!   `Mul`. A sum only appears as a base with a negative exponent (products
//!   are expanded). Below [`MAX_EXPANSION_POWER`], at most one base is a
//!   sum, with exponent -1, leading coefficient exactly one and no factor
//!   shared by all of its terms.
//! * A `Mul` with exact coefficient one and a single first-power factor is
//!   replaced by that factor.
//! * `Pow` only holds non-integer or symbolic exponents.
//!
//! The constructors in this module take canonical operands and return
//! canonical results; [`canonicalize`] rebuilds a tree bottom-up with them.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use crate::error::MathError;
use crate::expr::{Expr, FuncKind, SymbolName};
use crate::number::Number;

/// Integer powers of sums above this are left unexpanded.
pub const MAX_EXPANSION_POWER: i64 = 64;

type Result<T> = std::result::Result<T, MathError>;

pub fn canonicalize(e: &Expr) -> Result<Expr> {
    match e {
        Expr::Number(_) | Expr::Symbol(_) | Expr::Unit(_) => Ok(e.clone()),
        Expr::Add(terms) => add(terms.iter().map(canonicalize).collect::<Result<_>>()?),
        Expr::Mul(coeff, factors) => {
            let factors = factors
                .iter()
                .map(|(b, k)| Ok((canonicalize(b)?, *k)))
                .collect::<Result<Vec<_>>>()?;
            mul_powers(coeff.clone(), factors)
        }
        Expr::Pow(b, x) => pow(canonicalize(b)?, canonicalize(x)?),
        Expr::Func(kind, arg) => Ok(func(*kind, canonicalize(arg)?)),
        Expr::Integral(body, v) => Ok(Expr::Integral(Box::new(canonicalize(body)?), v.clone())),
        Expr::Derivative(body, v) => Ok(Expr::Derivative(Box::new(canonicalize(body)?), v.clone())),
        Expr::Solve(eq) => Ok(Expr::Solve(Box::new(canonicalize(eq)?))),
        Expr::Value(arg) => Ok(Expr::Value(Box::new(canonicalize(arg)?))),
        Expr::Equation(l, r) => Ok(Expr::Equation(
            Box::new(canonicalize(l)?),
            Box::new(canonicalize(r)?),
        )),
    }
}

/// Structural equality of canonical forms. Expressions that fail to
/// canonicalize are never equal to anything.
pub fn expr_equals(a: &Expr, b: &Expr) -> bool {
    match (canonicalize(a), canonicalize(b)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

/// Replaces bound symbols and canonicalizes. Integration and differentiation
/// variables are not substituted inside their own bodies.
pub fn substitute(e: &Expr, bindings: &HashMap<SymbolName, Expr>) -> Result<Expr> {
    canonicalize(&replace_symbols(e, &|s| bindings.get(s).cloned()))
}

/// Raw (uncanonicalized) symbol replacement driven by `lookup`.
pub fn replace_symbols(e: &Expr, lookup: &dyn Fn(&SymbolName) -> Option<Expr>) -> Expr {
    match e {
        Expr::Number(_) | Expr::Unit(_) => e.clone(),
        Expr::Symbol(s) => lookup(s).unwrap_or_else(|| e.clone()),
        Expr::Add(terms) => Expr::Add(terms.iter().map(|t| replace_symbols(t, lookup)).collect()),
        Expr::Mul(c, factors) => Expr::Mul(
            c.clone(),
            factors
                .iter()
                .map(|(b, k)| (replace_symbols(b, lookup), *k))
                .collect(),
        ),
        Expr::Pow(b, x) => Expr::Pow(
            Box::new(replace_symbols(b, lookup)),
            Box::new(replace_symbols(x, lookup)),
        ),
        Expr::Func(kind, a) => Expr::Func(*kind, Box::new(replace_symbols(a, lookup))),
        Expr::Integral(body, v) | Expr::Derivative(body, v) => {
            let inner = |s: &SymbolName| if s == v { None } else { lookup(s) };
            let body = Box::new(replace_symbols(body, &inner));
            match e {
                Expr::Integral(..) => Expr::Integral(body, v.clone()),
                _ => Expr::Derivative(body, v.clone()),
            }
        }
        Expr::Solve(a) => Expr::Solve(Box::new(replace_symbols(a, lookup))),
        Expr::Value(a) => Expr::Value(Box::new(replace_symbols(a, lookup))),
        Expr::Equation(l, r) => Expr::Equation(
            Box::new(replace_symbols(l, lookup)),
            Box::new(replace_symbols(r, lookup)),
        ),
    }
}

// ---------------------------------------------------------------------------
// Sums

/// Splits a canonical term into its numeric coefficient and monomial.
/// Constants have no monomial.
pub fn split_coefficient(term: &Expr) -> (Number, Option<Expr>) {
    match term {
        Expr::Number(n) => (n.clone(), None),
        Expr::Mul(c, factors) => (c.clone(), Some(build_mul(Number::one(), factors.clone()))),
        other => (Number::one(), Some(other.clone())),
    }
}

fn with_coefficient(coeff: Number, monomial: Option<Expr>) -> Expr {
    match monomial {
        None => Expr::Number(coeff),
        Some(Expr::Mul(c, factors)) => build_mul(coeff.mul(&c), factors),
        Some(m) => build_mul(coeff, vec![(m, 1)]),
    }
}

/// Monomial factor view used for ordering terms.
fn monomial_factors(m: &Expr) -> Vec<(&Expr, i64)> {
    match m {
        Expr::Mul(_, factors) => factors.iter().map(|(b, k)| (b, *k)).collect(),
        other => vec![(other, 1)],
    }
}

/// Order of sum terms by monomial: higher powers first, constants last.
pub fn cmp_monomial(a: &Option<Expr>, b: &Option<Expr>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
        (Some(a), Some(b)) => {
            let fa = monomial_factors(a);
            let fb = monomial_factors(b);
            for ((ba, ka), (bb, kb)) in fa.iter().zip(fb.iter()) {
                let ord = ba.cmp(bb).then_with(|| kb.cmp(ka));
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            fb.len().cmp(&fa.len())
        }
    }
}

pub fn add(terms: Vec<Expr>) -> Result<Expr> {
    let mut flat = Vec::with_capacity(terms.len());
    for t in terms {
        match t {
            Expr::Add(inner) => flat.extend(inner),
            other => flat.push(other),
        }
    }

    let mut order: Vec<Option<Expr>> = Vec::new();
    let mut coeffs: HashMap<Option<Expr>, Number> = HashMap::new();
    for t in &flat {
        let (c, m) = split_coefficient(t);
        match coeffs.get_mut(&m) {
            Some(acc) => *acc = acc.add(&c),
            None => {
                order.push(m.clone());
                coeffs.insert(m, c);
            }
        }
    }
    order.sort_by(cmp_monomial);

    let mut out = Vec::with_capacity(order.len());
    for m in order {
        let c = coeffs.remove(&m).expect("coefficient recorded");
        if c.is_zero() {
            continue;
        }
        out.push(with_coefficient(c, m));
    }
    Ok(match out.len() {
        0 => Expr::Number(Number::zero()),
        1 => out.pop().unwrap(),
        _ => Expr::Add(out),
    })
}

pub fn neg(e: Expr) -> Result<Expr> {
    scale(e, &Number::from_i64(-1))
}

pub fn sub(a: Expr, b: Expr) -> Result<Expr> {
    add(vec![a, neg(b)?])
}

pub fn scale(e: Expr, by: &Number) -> Result<Expr> {
    mul_powers(by.clone(), vec![(e, 1)])
}

// ---------------------------------------------------------------------------
// Products

pub fn mul(factors: Vec<Expr>) -> Result<Expr> {
    mul_powers(Number::one(), factors.into_iter().map(|f| (f, 1)).collect())
}

pub fn div(a: Expr, b: Expr) -> Result<Expr> {
    mul_powers(Number::one(), vec![(a, 1), (b, -1)])
}

/// Assembles a `Mul` from already-merged, sorted factors.
fn build_mul(coeff: Number, factors: Vec<(Expr, i64)>) -> Expr {
    if coeff.is_zero() {
        return Expr::Number(Number::zero());
    }
    if factors.is_empty() {
        return Expr::Number(coeff);
    }
    if coeff.is_one() && factors.len() == 1 && factors[0].1 == 1 {
        return factors.into_iter().next().unwrap().0;
    }
    Expr::Mul(coeff, factors)
}

fn checked_exp(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(MathError::ExponentTooLarge(a))
}

/// Product `coeff * prod(base^k)` of canonical bases.
pub fn mul_powers(coeff: Number, factors: Vec<(Expr, i64)>) -> Result<Expr> {
    let mut coeff = coeff;
    let mut pending: Vec<(Expr, i64)> = Vec::with_capacity(factors.len());
    for (base, k) in factors {
        push_factor(&mut coeff, &mut pending, base, k)?;
    }
    if coeff.is_zero() {
        return Ok(Expr::Number(Number::zero()));
    }

    pending.sort_by(|a, b| a.0.cmp(&b.0));
    let mut merged: Vec<(Expr, i64)> = Vec::with_capacity(pending.len());
    for (base, k) in pending {
        match merged.last_mut() {
            Some((b, acc)) if *b == base => {
                *acc = acc.checked_add(k).ok_or(MathError::ExponentTooLarge(k))?;
            }
            _ => merged.push((base, k)),
        }
    }
    merged.retain(|(_, k)| *k != 0);

    let expandable = merged
        .iter()
        .position(|(b, k)| matches!(b, Expr::Add(_)) && *k > 0 && *k <= MAX_EXPANSION_POWER);
    if let Some(i) = expandable {
        let (sum, k) = merged.remove(i);
        let Expr::Add(terms) = sum else { unreachable!() };
        let mut acc = mul_powers(coeff, merged)?;
        for _ in 0..k {
            acc = distribute(&acc, &terms)?;
        }
        return Ok(acc);
    }

    // Sums in a denominator are multiplied out into a single sum:
    // 1/((x+1)^2 (y+1)) -> (x^2 y + x^2 + 2x y + 2x + y + 1)^-1.
    let denominators: Vec<usize> = merged
        .iter()
        .enumerate()
        .filter(|(_, (b, k))| matches!(b, Expr::Add(_)) && *k < 0)
        .map(|(i, _)| i)
        .collect();
    let degree: i64 = denominators.iter().map(|&i| -merged[i].1).sum();
    if degree > 1 && degree <= MAX_EXPANSION_POWER {
        let mut sums = Vec::with_capacity(denominators.len());
        for &i in denominators.iter().rev() {
            let (b, k) = merged.remove(i);
            sums.push((b, -k));
        }
        merged.push((mul_powers(Number::one(), sums)?, -1));
        return mul_powers(coeff, merged);
    }

    Ok(build_mul(coeff, merged))
}

fn distribute(left: &Expr, terms: &[Expr]) -> Result<Expr> {
    let products = terms
        .iter()
        .map(|t| mul(vec![left.clone(), t.clone()]))
        .collect::<Result<Vec<_>>>()?;
    add(products)
}

fn push_factor(
    coeff: &mut Number,
    pending: &mut Vec<(Expr, i64)>,
    base: Expr,
    k: i64,
) -> Result<()> {
    if k == 0 {
        return Ok(());
    }
    match base {
        Expr::Number(n) => {
            *coeff = coeff.mul(&n.pow(k)?);
        }
        Expr::Mul(c, inner) => {
            *coeff = coeff.mul(&c.pow(k)?);
            for (b, e) in inner {
                push_factor(coeff, pending, b, checked_exp(e, k)?)?;
            }
        }
        Expr::Add(terms) => {
            let content = common_factors(&terms);
            if !content.is_empty() {
                let divided = terms
                    .into_iter()
                    .map(|t| {
                        let (c, mut fs) = term_factors(t);
                        fs.extend(content.iter().map(|(b, e)| (b.clone(), -e)));
                        mul_powers(c, fs)
                    })
                    .collect::<Result<Vec<_>>>()?;
                for (b, e) in content {
                    push_factor(coeff, pending, b, checked_exp(e, k)?)?;
                }
                return push_factor(coeff, pending, add(divided)?, k);
            }
            // Pull out the leading coefficient: (2x + 2) -> 2 (x + 1).
            let (lead, _) = split_coefficient(&terms[0]);
            if !lead.is_one() && lead.places().is_none() {
                let inv = lead.recip()?;
                let scaled = add(
                    terms
                        .into_iter()
                        .map(|t| scale(t, &inv))
                        .collect::<Result<Vec<_>>>()?,
                )?;
                *coeff = coeff.mul(&lead.pow(k)?);
                push_factor(coeff, pending, scaled, k)?;
            } else {
                pending.push((Expr::Add(terms), k));
            }
        }
        other => pending.push((other, k)),
    }
    Ok(())
}

fn term_factors(t: Expr) -> (Number, Vec<(Expr, i64)>) {
    match t {
        Expr::Mul(c, fs) => (c, fs),
        Expr::Number(n) => (n, Vec::new()),
        other => (Number::one(), vec![(other, 1)]),
    }
}

/// Factors shared by every term of a sum, each at its smallest exponent
/// (a term without the factor counts as exponent 0).
fn common_factors(terms: &[Expr]) -> Vec<(Expr, i64)> {
    let exponents: Vec<BTreeMap<&Expr, i64>> = terms
        .iter()
        .map(|t| match t {
            Expr::Mul(_, fs) => fs.iter().map(|(b, k)| (b, *k)).collect(),
            Expr::Number(_) => BTreeMap::new(),
            other => BTreeMap::from([(other, 1)]),
        })
        .collect();
    let mut bases: Vec<&Expr> = exponents.iter().flat_map(|m| m.keys().copied()).collect();
    bases.sort();
    bases.dedup();
    bases
        .into_iter()
        .filter_map(|b| {
            let min = exponents
                .iter()
                .map(|m| m.get(b).copied().unwrap_or(0))
                .min()?;
            (min != 0).then(|| (b.clone(), min))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Powers and functions

pub fn powi(base: Expr, k: i64) -> Result<Expr> {
    if k == 0 {
        return Ok(Expr::Number(Number::one()));
    }
    mul_powers(Number::one(), vec![(base, k)])
}

pub fn pow(base: Expr, exp: Expr) -> Result<Expr> {
    if let Expr::Number(n) = &exp {
        if let Some(k) = n.to_i64() {
            return powi(base, k);
        }
        if n.is_integer() {
            return Err(MathError::ExponentTooLarge(i64::MAX));
        }
        if let Expr::Number(b) = &base {
            if b.is_one() {
                return Ok(base);
            }
            if b.is_zero() && !n.is_negative() {
                return Ok(base);
            }
            if b.is_zero() {
                return Err(MathError::DivisionByZero);
            }
        }
    } else if base.is_one() {
        return Ok(base);
    }
    Ok(Expr::Pow(Box::new(base), Box::new(exp)))
}

/// Applies a function, folding the exact special values cos 0, sin 0, exp 0
/// and ln 1.
pub fn func(kind: FuncKind, arg: Expr) -> Expr {
    if let Expr::Number(n) = &arg {
        match kind {
            FuncKind::Cos if n.is_zero() => return Expr::int(1),
            FuncKind::Sin if n.is_zero() => return Expr::int(0),
            FuncKind::Exp if n.is_zero() => return Expr::int(1),
            FuncKind::Ln if n.value() == Number::one().value() => return Expr::int(0),
            _ => {}
        }
    }
    Expr::Func(kind, Box::new(arg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Expr {
        Expr::sym("x")
    }

    fn c(e: Expr) -> Expr {
        canonicalize(&e).unwrap()
    }

    #[test]
    fn additive_identity() {
        assert_eq!(c(Expr::Add(vec![x(), Expr::int(0)])), x());
    }

    #[test]
    fn like_terms_collect() {
        let e = Expr::Add(vec![x(), Expr::product(vec![Expr::int(2), x()]), Expr::int(3), Expr::int(4)]);
        assert_eq!(c(e), Expr::Add(vec![Expr::Mul(Number::from_i64(3), vec![(x(), 1)]), Expr::int(7)]));
    }

    #[test]
    fn exponents_merge() {
        let e = Expr::Mul(Number::one(), vec![(x(), 2), (x(), 3), (Expr::sym("y"), 1), (Expr::sym("y"), -1)]);
        assert_eq!(c(e), Expr::Mul(Number::one(), vec![(x(), 5)]));
    }

    #[test]
    fn power_one_is_identity() {
        let sum = Expr::Add(vec![x(), Expr::int(1)]);
        let e = Expr::Pow(Box::new(sum.clone()), Box::new(Expr::int(1)));
        assert!(expr_equals(&e, &sum));
    }

    #[test]
    fn products_expand() {
        // (x + 1)(x - 1) = x^2 - 1
        let e = Expr::product(vec![
            Expr::Add(vec![x(), Expr::int(1)]),
            Expr::Add(vec![x(), Expr::int(-1)]),
        ]);
        assert_eq!(
            c(e),
            Expr::Add(vec![Expr::Mul(Number::one(), vec![(x(), 2)]), Expr::int(-1)])
        );
    }

    #[test]
    fn scaled_sums_share_a_base() {
        let a = canonicalize(&Expr::Mul(Number::one(), vec![(Expr::Add(vec![Expr::product(vec![Expr::int(2), x()]), Expr::int(2)]), -1)])).unwrap();
        let b = canonicalize(&Expr::Mul(Number::ratio(1, 2), vec![(Expr::Add(vec![x(), Expr::int(1)]), -1)])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn literal_zero_denominator() {
        let e = Expr::Mul(Number::one(), vec![(Expr::int(1), 1), (Expr::int(0), -1)]);
        assert_eq!(canonicalize(&e), Err(MathError::DivisionByZero));
    }

    #[test]
    fn function_special_values() {
        assert_eq!(c(Expr::func(FuncKind::Cos, Expr::int(0))), Expr::int(1));
        assert_eq!(c(Expr::func(FuncKind::Sin, Expr::int(0))), Expr::int(0));
        assert_eq!(c(Expr::func(FuncKind::Exp, Expr::int(0))), Expr::int(1));
        assert_eq!(c(Expr::func(FuncKind::Ln, Expr::int(1))), Expr::int(0));
        assert!(matches!(c(Expr::func(FuncKind::Sin, Expr::int(1))), Expr::Func(..)));
    }

    #[test]
    fn substitution_evaluates_eagerly() {
        let a_cos = Expr::product(vec![
            Expr::sym("a"),
            Expr::func(FuncKind::Cos, Expr::product(vec![Expr::int(2), x()])),
        ]);
        let bindings = HashMap::from([(SymbolName::new("a"), Expr::int(2))]);
        let expected = Expr::Mul(
            Number::from_i64(2),
            vec![(Expr::func(FuncKind::Cos, Expr::Mul(Number::from_i64(2), vec![(x(), 1)])), 1)],
        );
        assert_eq!(substitute(&a_cos, &bindings).unwrap(), expected);
        assert_eq!(substitute(&x(), &HashMap::new()).unwrap(), x());
    }

    #[test]
    fn cancellation_to_zero() {
        let e = Expr::Add(vec![x(), Expr::Mul(Number::from_i64(-1), vec![(x(), 1)])]);
        assert_eq!(c(e), Expr::int(0));
    }
}
