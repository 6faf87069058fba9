mod common;

use std::collections::HashMap;

use common::{close, parenthesized, point, rng, value};
use mathpar::sample::{integrable_expr, linear_equation, quantity_expr, smooth_expr};
use mathpar::{
    canonicalize, differentiate, expr_equals, integrate, parse_expr, render_expr, solve_linear,
    substitute, Expr, Number, Rational, Style, SymbolName,
};
use rand::seq::SliceRandom;
use rand::Rng;

fn x() -> SymbolName {
    SymbolName::new("x")
}

#[test]
fn canonicalize_is_idempotent_and_value_preserving() {
    let mut rng = rng(1);
    for _ in 0..1000 {
        let raw = smooth_expr(&mut rng, 3);
        let c = canonicalize(&raw).unwrap();
        assert_eq!(canonicalize(&c).unwrap(), c, "{raw}");
        for _ in 0..3 {
            let at = point(&mut rng);
            let (a, b) = (value(&raw, &at).unwrap(), value(&c, &at).unwrap());
            assert!(close(a, b, 1e-9), "{raw} -> {c}: {a} vs {b}");
        }
    }
}

#[test]
fn minimal_parentheses_parse_like_full_parentheses() {
    let mut rng = rng(2);
    for _ in 0..1000 {
        let raw = quantity_expr(&mut rng, 3);
        let minimal = render_expr(&raw, Style::Source);
        let full = parenthesized(&raw);
        let a = canonicalize(&parse_expr(&minimal).unwrap()).unwrap();
        let b = canonicalize(&parse_expr(&full).unwrap()).unwrap();
        assert_eq!(a, b, "{minimal}  vs  {full}");
        assert_eq!(a, canonicalize(&raw).unwrap(), "{minimal}");
    }
}

#[test]
fn source_rendering_round_trips() {
    let mut rng = rng(3);
    for _ in 0..1000 {
        let e = canonicalize(&quantity_expr(&mut rng, 3)).unwrap();
        let text = render_expr(&e, Style::Source);
        let back = canonicalize(&parse_expr(&text).unwrap()).unwrap();
        assert_eq!(back, e, "{text}");
    }
}

#[test]
fn sum_order_does_not_matter() {
    let mut rng = rng(4);
    for _ in 0..300 {
        let mut terms: Vec<Expr> = (0..rng.gen_range(2..6)).map(|_| smooth_expr(&mut rng, 2)).collect();
        let first = canonicalize(&Expr::Add(terms.clone())).unwrap();
        terms.shuffle(&mut rng);
        assert_eq!(canonicalize(&Expr::Add(terms.clone())).unwrap(), first);
        terms.shuffle(&mut rng);
        let product = canonicalize(&Expr::product(terms.clone())).unwrap();
        terms.reverse();
        assert_eq!(canonicalize(&Expr::product(terms)).unwrap(), product);
    }
}

#[test]
fn rational_arithmetic_is_exact() {
    let mut rng = rng(5);
    for _ in 0..1000 {
        let (a, b) = (
            (rng.gen_range(-50i64..50), rng.gen_range(1i64..20)),
            (rng.gen_range(-50i64..50), rng.gen_range(1i64..20)),
        );
        let ra = Rational::new(a.0.into(), a.1.into());
        let rb = Rational::new(b.0.into(), b.1.into());
        let ea = Expr::ratio(a.0, a.1);
        let eb = Expr::ratio(b.0, b.1);
        let sum = canonicalize(&Expr::Add(vec![ea.clone(), eb.clone()])).unwrap();
        assert_eq!(sum, Expr::Number(Number::new(&ra + &rb)));
        let prod = canonicalize(&Expr::product(vec![ea.clone(), eb.clone()])).unwrap();
        assert_eq!(prod, Expr::Number(Number::new(&ra * &rb)));
        let quot = canonicalize(&Expr::Mul(Number::one(), vec![(ea, 1), (eb, -1)]));
        if rb == Rational::from_integer(0.into()) {
            assert!(quot.is_err());
        } else {
            assert_eq!(quot.unwrap(), Expr::Number(Number::new(&ra / &rb)));
        }
    }
}

#[test]
fn substitution_composes() {
    let mut rng = rng(6);
    let (xs, ys) = (SymbolName::new("x"), SymbolName::new("y"));
    for _ in 0..300 {
        let e = smooth_expr(&mut rng, 3);
        let a = Expr::Add(vec![Expr::sym("z"), mathpar::sample::small_rational(&mut rng)]);
        let b = Expr::product(vec![Expr::sym("z"), Expr::sym("z")]);
        let one = HashMap::from([(xs.clone(), a.clone())]);
        let two = HashMap::from([(ys.clone(), b.clone())]);
        let both = HashMap::from([(xs.clone(), a), (ys.clone(), b)]);
        let stepwise = substitute(&substitute(&e, &one).unwrap(), &two).unwrap();
        assert_eq!(stepwise, substitute(&e, &both).unwrap(), "{e}");
    }
}

#[test]
fn derivative_matches_central_difference() {
    let mut rng = rng(7);
    let h = 1e-5;
    for _ in 0..500 {
        let f = smooth_expr(&mut rng, 3);
        let d = differentiate(&f, &x()).unwrap();
        let mut at = point(&mut rng);
        let x0 = at[&x()];
        at.insert(x(), x0 + h);
        let up = value(&f, &at).unwrap();
        at.insert(x(), x0 - h);
        let down = value(&f, &at).unwrap();
        at.insert(x(), x0);
        let exact = value(&d, &at).unwrap();
        let fd = (up - down) / (2.0 * h);
        assert!((exact - fd).abs() <= 1e-4 * (1.0 + exact.abs()), "{f}: {exact} vs {fd}");
    }
}

#[test]
fn derivative_undoes_integral() {
    let mut rng = rng(8);
    for _ in 0..500 {
        let f = integrable_expr(&mut rng, &x());
        let g = integrate(&f, &x()).unwrap();
        let back = differentiate(&g, &x()).unwrap();
        assert!(expr_equals(&back, &f), "{f}: integral {g}, derivative {back}");
    }
}

#[test]
fn solutions_satisfy_equations_and_ignore_scaling() {
    let mut rng = rng(9);
    let units = ["kJ/kg", "kJ", "1", "kJ/(kg \\degreeC)"];
    for _ in 0..500 {
        let su = parse_expr(units.choose(&mut rng).unwrap()).unwrap();
        let ou = parse_expr(units.choose(&mut rng).unwrap()).unwrap();
        let (lhs, rhs) = linear_equation(&mut rng, &su, &ou);
        let sol = solve_linear(&lhs, &rhs, &x()).unwrap().value;
        let at = HashMap::from([(x(), sol.clone())]);
        let residual = canonicalize(&Expr::Add(vec![
            substitute(&lhs, &at).unwrap(),
            Expr::product(vec![Expr::int(-1), substitute(&rhs, &at).unwrap()]),
        ]))
        .unwrap();
        assert!(residual.is_zero(), "{lhs} = {rhs}: x = {sol}, residual {residual}");

        let k = Expr::Mul(
            Number::ratio(rng.gen_range(1..9), rng.gen_range(1..5)),
            vec![(parse_expr("kg").unwrap(), rng.gen_range(-1..=1))],
        );
        let scaled = solve_linear(
            &Expr::product(vec![k.clone(), lhs.clone()]),
            &Expr::product(vec![k, rhs.clone()]),
            &x(),
        )
        .unwrap()
        .value;
        assert_eq!(scaled, sol, "{lhs} = {rhs}");
    }
}
