//! Random expressions for property testing.
//!
//! Every generator returns raw, uncanonicalized trees. Expressions from
//! [`smooth_expr`] are finite and differentiable for all real values of the
//! variables in [`VARIABLES`].

use rand::seq::SliceRandom;
use rand::Rng;

use crate::expr::{Expr, FuncKind, SymbolName};

pub const VARIABLES: [&str; 3] = ["x", "y", "z"];

const UNITS: [&str; 3] = ["kg", "kJ", "degreeC"];

pub fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> Expr {
    let num = rng.gen_range(-5..=5);
    let den = *[1, 1, 1, 2, 3, 4, 5].choose(rng).unwrap();
    Expr::ratio(num, den)
}

fn nonzero_rational<R: Rng + ?Sized>(rng: &mut R) -> Expr {
    loop {
        let n = small_rational(rng);
        if !n.is_zero() {
            return n;
        }
    }
}

fn variable<R: Rng + ?Sized>(rng: &mut R) -> Expr {
    Expr::sym(VARIABLES.choose(rng).unwrap())
}

/// `a·v + b` in one of the variables, with `0 < |a| <= 1` and `|b| <= 1`.
pub fn linear<R: Rng + ?Sized>(rng: &mut R) -> Expr {
    let a = Expr::ratio(*[-2, -1, 1, 2].choose(rng).unwrap(), 2);
    let b = Expr::ratio(rng.gen_range(-2..=2), 2);
    Expr::Add(vec![Expr::product(vec![a, variable(rng)]), b])
}

/// A sum that is positive everywhere, e.g. `v^2 + 3/2`.
fn positive<R: Rng + ?Sized>(rng: &mut R) -> Expr {
    let c = Expr::ratio(rng.gen_range(1..=5), rng.gen_range(1..=3));
    match rng.gen_range(0..3) {
        0 => Expr::Add(vec![Expr::Pow(Box::new(variable(rng)), Box::new(Expr::int(2))), c]),
        1 => Expr::func(FuncKind::Exp, linear(rng)),
        _ => Expr::Add(vec![Expr::Pow(Box::new(linear(rng)), Box::new(Expr::int(2))), c]),
    }
}

/// A smooth expression built from rationals, variables, sums, products,
/// small integer powers, quotients by positive sums and the four functions.
pub fn smooth_expr<R: Rng + ?Sized>(rng: &mut R, depth: u32) -> Expr {
    if depth == 0 {
        return match rng.gen_range(0..3) {
            0 => small_rational(rng),
            _ => variable(rng),
        };
    }
    let sub = |rng: &mut R| smooth_expr(rng, depth - 1);
    match rng.gen_range(0..10) {
        0 => small_rational(rng),
        1 => variable(rng),
        2 | 3 => {
            let n = rng.gen_range(2..=3);
            Expr::Add((0..n).map(|_| sub(rng)).collect())
        }
        4 | 5 => {
            let n = rng.gen_range(2..=3);
            Expr::product((0..n).map(|_| sub(rng)).collect())
        }
        6 => Expr::Pow(Box::new(sub(rng)), Box::new(Expr::int(rng.gen_range(0..=3)))),
        7 => Expr::Mul(crate::Number::one(), vec![(sub(rng), 1), (positive(rng), -1)]),
        8 => {
            let kind = *[FuncKind::Sin, FuncKind::Cos].choose(rng).unwrap();
            Expr::func(kind, sub(rng))
        }
        _ => match rng.gen_range(0..2) {
            0 => Expr::func(FuncKind::Exp, linear(rng)),
            _ => Expr::func(FuncKind::Ln, positive(rng)),
        },
    }
}

/// Like [`smooth_expr`], with units attached to some leaves.
pub fn quantity_expr<R: Rng + ?Sized>(rng: &mut R, depth: u32) -> Expr {
    let e = smooth_expr(rng, depth);
    if rng.gen_bool(0.5) {
        let unit = Expr::unit(UNITS.choose(rng).unwrap());
        let k = *[1, 1, -1, 2].choose(rng).unwrap();
        Expr::Mul(crate::Number::one(), vec![(e, 1), (unit, k)])
    } else {
        e
    }
}

/// A sum of terms from the integrable class in `var`: constants, `c·v^n`
/// with `n ≠ -1`, `c/v`, `c·v^r` for fractional `r`, and `c·f(a·v + b)`
/// with `f` one of sin, cos, exp.
pub fn integrable_expr<R: Rng + ?Sized>(rng: &mut R, var: &SymbolName) -> Expr {
    let v = Expr::Symbol(var.clone());
    let n = rng.gen_range(1..=4);
    let terms = (0..n)
        .map(|_| {
            let c = nonzero_rational(rng);
            let body = match rng.gen_range(0..6) {
                0 => return c,
                1 => {
                    let k = *[-3, -2, 1, 2, 3, 4].choose(rng).unwrap();
                    Expr::Pow(Box::new(v.clone()), Box::new(Expr::int(k)))
                }
                2 => Expr::Pow(Box::new(v.clone()), Box::new(Expr::int(-1))),
                3 => {
                    let r = *[(1, 2), (-1, 2), (1, 3), (5, 2)].choose(rng).unwrap();
                    Expr::Pow(Box::new(v.clone()), Box::new(Expr::ratio(r.0, r.1)))
                }
                _ => {
                    let kind = *[FuncKind::Sin, FuncKind::Cos, FuncKind::Exp].choose(rng).unwrap();
                    let arg = Expr::Add(vec![
                        Expr::product(vec![nonzero_rational(rng), v.clone()]),
                        small_rational(rng),
                    ]);
                    Expr::func(kind, arg)
                }
            };
            Expr::product(vec![c, body])
        })
        .collect();
    Expr::Add(terms)
}

/// A monomial coefficient such as `3/2 y^2 kJ/kg`, never zero. The unit
/// part is always `unit`.
fn coefficient<R: Rng + ?Sized>(rng: &mut R, unit: &Expr, param: bool) -> Expr {
    let mut factors = vec![(nonzero_rational(rng), 1), (unit.clone(), 1)];
    if param && rng.gen_bool(0.5) {
        factors.push((Expr::sym("y"), rng.gen_range(1..=2)));
    }
    Expr::Mul(crate::Number::one(), factors)
}

/// Two sides of an equation linear in `x`, with `x` appearing with
/// a nonzero net coefficient. The coefficients of `x` all carry
/// `slope_unit`, the remaining terms all carry `offset_unit`.
pub fn linear_equation<R: Rng + ?Sized>(
    rng: &mut R,
    slope_unit: &Expr,
    offset_unit: &Expr,
) -> (Expr, Expr) {
    let x = Expr::sym("x");
    loop {
        let param = rng.gen_bool(0.3);
        let mut sides = [Vec::new(), Vec::new()];
        let mut slope = vec![];
        for (i, side) in sides.iter_mut().enumerate() {
            for _ in 0..rng.gen_range(1..=2) {
                let a = coefficient(rng, slope_unit, param);
                slope.push(if i == 0 {
                    a.clone()
                } else {
                    Expr::product(vec![Expr::int(-1), a.clone()])
                });
                side.push(Expr::product(vec![a, x.clone()]));
            }
            for _ in 0..rng.gen_range(0..=2) {
                side.push(coefficient(rng, offset_unit, false));
            }
        }
        let net = crate::canonicalize(&Expr::Add(slope)).ok();
        // The net slope must be a single monomial.
        if matches!(net, Some(ref n) if !n.is_zero() && !matches!(n, Expr::Add(_))) {
            let [l, r] = sides;
            return (Expr::Add(l), Expr::Add(r));
        }
    }
}
