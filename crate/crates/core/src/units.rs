//! Physical units as literal factors.
//!
//! Units live inside ordinary expressions as [`Expr::Unit`] factors and are
//! reduced by the usual exponent arithmetic. This module only classifies
//! names and pulls the unit part out of a quantity when it is needed.

use std::collections::BTreeMap;
use std::fmt;

use crate::canon;
use crate::error::MathError;
use crate::expr::{Expr, SymbolName, UnitSymbol, DEGREE_CELSIUS};
use crate::number::Number;

/// Product of unit symbols with nonzero integer exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UnitMonomial {
    exponents: BTreeMap<UnitSymbol, i64>,
}

impl UnitMonomial {
    pub fn dimensionless() -> Self {
        Self::default()
    }

    pub fn single(unit: UnitSymbol, exp: i64) -> Self {
        let mut m = Self::default();
        m.insert(unit, exp);
        m
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (UnitSymbol, i64)>) -> Self {
        let mut m = Self::default();
        for (u, k) in pairs {
            m.insert(u, k);
        }
        m
    }

    fn insert(&mut self, unit: UnitSymbol, exp: i64) {
        let entry = self.exponents.entry(unit.clone()).or_insert(0);
        *entry += exp;
        if *entry == 0 {
            self.exponents.remove(&unit);
        }
    }

    pub fn is_dimensionless(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponent(&self, name: &str) -> i64 {
        self.exponents
            .iter()
            .find(|(u, _)| u.name == name)
            .map_or(0, |(_, k)| *k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&UnitSymbol, i64)> {
        self.exponents.iter().map(|(u, k)| (u, *k))
    }

    pub fn inverse(&self) -> Self {
        UnitMonomial {
            exponents: self.exponents.iter().map(|(u, k)| (u.clone(), -k)).collect(),
        }
    }

    /// The monomial as an expression factor list.
    pub fn to_expr(&self) -> Expr {
        canon::mul_powers(
            Number::one(),
            self.exponents.iter().map(|(u, k)| (Expr::Unit(u.clone()), *k)).collect(),
        )
        .expect("unit factors never fail to combine")
    }
}

/// Pointwise exponent addition.
pub fn reduce_units(a: &UnitMonomial, b: &UnitMonomial) -> UnitMonomial {
    let mut out = a.clone();
    for (u, k) in b.iter() {
        out.insert(u.clone(), k);
    }
    out
}

impl fmt::Display for UnitMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_dimensionless() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(u, k)| if k == 1 { u.name.clone() } else { format!("{}^{}", u.name, k) })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolClass {
    Variable,
    Unit,
}

/// Known unit names. Append-only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitRegistry {
    units: Vec<UnitSymbol>,
}

impl Default for UnitRegistry {
    fn default() -> Self {
        UnitRegistry {
            units: vec![
                UnitSymbol::plain("kg"),
                UnitSymbol::plain("kJ"),
                UnitSymbol::degree_celsius(),
            ],
        }
    }
}

impl UnitRegistry {
    /// Adds a unit. Names must be plain letter sequences; registering an
    /// existing name is a no-op.
    pub fn register(&mut self, name: &str, display: Option<&str>) -> Result<UnitSymbol, String> {
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphabetic()) {
            return Err(format!("invalid unit name {name:?}"));
        }
        if let Some(existing) = self.lookup(name) {
            return Ok(existing.clone());
        }
        let unit = UnitSymbol::new(name, display.unwrap_or(name));
        self.units.push(unit.clone());
        Ok(unit)
    }

    pub fn lookup(&self, name: &str) -> Option<&UnitSymbol> {
        self.units.iter().find(|u| u.name == name)
    }

    /// The unit a symbol name denotes, if any. Subscripted names are never units.
    pub fn unit_for(&self, name: &SymbolName) -> Option<&UnitSymbol> {
        if name.subscript.is_some() || name.base == DEGREE_CELSIUS {
            return None;
        }
        self.lookup(&name.base)
    }

    pub fn classify(&self, name: &SymbolName) -> SymbolClass {
        if self.unit_for(name).is_some() {
            SymbolClass::Unit
        } else {
            SymbolClass::Variable
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &UnitSymbol> {
        self.units.iter()
    }
}

/// Splits a canonical expression into its non-unit part and its units.
pub fn split_quantity(e: &Expr) -> Result<(Expr, UnitMonomial), MathError> {
    match e {
        Expr::Unit(u) => Ok((Expr::int(1), UnitMonomial::single(u.clone(), 1))),
        Expr::Mul(c, factors) => {
            let mut units = UnitMonomial::dimensionless();
            let mut rest = Vec::new();
            for (b, k) in factors {
                match b {
                    Expr::Unit(u) => units.insert(u.clone(), *k),
                    other => rest.push((other.clone(), *k)),
                }
            }
            Ok((canon::mul_powers(c.clone(), rest)?, units))
        }
        Expr::Add(terms) => {
            let mut parts = Vec::with_capacity(terms.len());
            let mut units: Option<UnitMonomial> = None;
            for t in terms {
                let (rest, m) = split_quantity(t)?;
                match &units {
                    Some(u) if *u != m => {
                        return Err(MathError::MixedUnitsInSum(format!("{u} and {m}")));
                    }
                    Some(_) => {}
                    None => units = Some(m),
                }
                parts.push(rest);
            }
            Ok((canon::add(parts)?, units.unwrap_or_default()))
        }
        other => Ok((other.clone(), UnitMonomial::dimensionless())),
    }
}

/// Inverse of [`split_quantity`].
pub fn recombine(rest: Expr, units: &UnitMonomial) -> Result<Expr, MathError> {
    canon::mul(vec![rest, units.to_expr()])
}

/// Rejects sums of terms that are plain quantities (numbers times units)
/// with different units. Terms mentioning free variables are not checked.
pub fn check_sums(e: &Expr) -> Result<(), MathError> {
    match find_mixed(e) {
        Some(err) => Err(err),
        None => Ok(()),
    }
}

fn find_mixed(e: &Expr) -> Option<MathError> {
    let children: Vec<&Expr> = match e {
        Expr::Add(terms) => {
            if terms.iter().all(|t| t.symbols().is_empty()) {
                if let Err(err) = split_quantity(e) {
                    return Some(err);
                }
            }
            terms.iter().collect()
        }
        Expr::Mul(_, factors) => factors.iter().map(|(b, _)| b).collect(),
        Expr::Pow(a, b) | Expr::Equation(a, b) => vec![a, b],
        Expr::Func(_, a) | Expr::Solve(a) | Expr::Value(a) | Expr::Integral(a, _) | Expr::Derivative(a, _) => {
            vec![a]
        }
        _ => vec![],
    };
    children.into_iter().find_map(find_mixed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kj() -> UnitSymbol {
        UnitSymbol::plain("kJ")
    }
    fn kg() -> UnitSymbol {
        UnitSymbol::plain("kg")
    }
    fn deg() -> UnitSymbol {
        UnitSymbol::degree_celsius()
    }

    #[test]
    fn classify_default_registry() {
        let reg = UnitRegistry::default();
        assert_eq!(reg.classify(&SymbolName::new("kg")), SymbolClass::Unit);
        assert_eq!(reg.classify(&SymbolName::new("x")), SymbolClass::Variable);
        assert_eq!(reg.classify(&SymbolName::with_subscript("kg", "1")), SymbolClass::Variable);
    }

    #[test]
    fn registration_round_trip() {
        let mut reg = UnitRegistry::default();
        assert_eq!(reg.classify(&SymbolName::new("mol")), SymbolClass::Variable);
        reg.register("mol", None).unwrap();
        assert_eq!(reg.classify(&SymbolName::new("mol")), SymbolClass::Unit);
        assert!(reg.register("m2", None).is_err());
    }

    #[test]
    fn specific_heat_times_mass_and_temperature() {
        let heat = UnitMonomial::from_pairs([(kj(), 1), (kg(), -1), (deg(), -1)]);
        let mass_temp = UnitMonomial::from_pairs([(kg(), 1), (deg(), 1)]);
        assert_eq!(reduce_units(&heat, &mass_temp), UnitMonomial::single(kj(), 1));
    }

    #[test]
    fn inverse_cancels() {
        let m = UnitMonomial::single(kg(), 1);
        assert!(reduce_units(&m, &m.inverse()).is_dimensionless());
    }

    #[test]
    fn energy_over_specific_energy() {
        let energy = UnitMonomial::single(kj(), 1);
        let specific = UnitMonomial::from_pairs([(kj(), 1), (kg(), -1)]);
        let out = reduce_units(&energy, &specific.inverse());
        // Integer-vector oracle over (kJ, kg, degC).
        let vec_of = |m: &UnitMonomial| [m.exponent("kJ"), m.exponent("kg"), m.exponent(DEGREE_CELSIUS)];
        let expected = [0, 1, 0];
        assert_eq!(vec_of(&out), expected);
        assert_eq!(out, UnitMonomial::single(kg(), 1));
    }

    #[test]
    fn split_examples() {
        let q = crate::canonicalize(&Expr::product(vec![Expr::ratio(1071, 230), Expr::unit("kg")])).unwrap();
        assert_eq!(split_quantity(&q).unwrap(), (Expr::ratio(1071, 230), UnitMonomial::single(kg(), 1)));
        assert_eq!(split_quantity(&Expr::int(7)).unwrap(), (Expr::int(7), UnitMonomial::dimensionless()));
    }

    #[test]
    fn split_sums() {
        let same = crate::canonicalize(&Expr::Add(vec![
            Expr::product(vec![Expr::int(2), Expr::unit("kJ")]),
            Expr::product(vec![Expr::int(3), Expr::unit("kJ")]),
        ]))
        .unwrap();
        assert_eq!(split_quantity(&same).unwrap(), (Expr::int(5), UnitMonomial::single(kj(), 1)));
        let mixed = crate::canonicalize(&Expr::Add(vec![
            Expr::product(vec![Expr::int(2), Expr::unit("kJ")]),
            Expr::product(vec![Expr::int(3), Expr::unit("kg")]),
        ]))
        .unwrap();
        assert!(matches!(split_quantity(&mixed), Err(MathError::MixedUnitsInSum(_))));
        assert!(check_sums(&mixed).is_err());
        let symbolic = crate::canonicalize(&Expr::Add(vec![Expr::sym("x"), Expr::unit("kg")])).unwrap();
        assert!(check_sums(&symbolic).is_ok());
    }
}
