#![allow(dead_code)]

use std::collections::HashMap;

use mathpar::{numeric_eval, Expr, MathError, SymbolName, UnitPolicy};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn point<R: Rng>(rng: &mut R) -> HashMap<SymbolName, f64> {
    mathpar::sample::VARIABLES
        .iter()
        .map(|v| (SymbolName::new(*v), rng.gen_range(-1.0..1.0)))
        .collect()
}

pub fn value(e: &Expr, at: &HashMap<SymbolName, f64>) -> Result<f64, MathError> {
    numeric_eval(e, at, UnitPolicy::AsOne)
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

/// Source text with every compound node in parentheses.
pub fn parenthesized(e: &Expr) -> String {
    match e {
        Expr::Number(n) => {
            let v = n.value();
            if v.is_integer() {
                format!("({})", v.numer())
            } else {
                format!("(({})/{})", v.numer(), v.denom())
            }
        }
        Expr::Symbol(_) | Expr::Unit(_) => e.to_string(),
        Expr::Add(ts) => format!(
            "({})",
            ts.iter().map(parenthesized).collect::<Vec<_>>().join(" + ")
        ),
        Expr::Mul(c, fs) => {
            let mut items = vec![parenthesized(&Expr::Number(c.clone()))];
            items.extend(fs.iter().map(|(b, k)| format!("({}^({}))", parenthesized(b), k)));
            format!("({})", items.join(" * "))
        }
        Expr::Pow(b, x) => format!("({}^{})", parenthesized(b), parenthesized(x)),
        Expr::Func(kind, a) => format!("\\{}({})", kind.name(), parenthesized(a)),
        other => panic!("unexpected node {other:?}"),
    }
}
