//! Exact rational numbers carrying an optional decimal display precision.
//!
//! Every number is stored exactly. A number produced by approximation
//! additionally remembers how many decimal places it should be shown with;
//! that hint never takes part in comparisons.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::MathError;
use crate::Rational;

/// Largest integer exponent applied to an exact number.
pub const MAX_NUMERIC_EXPONENT: i64 = 4096;

#[derive(Clone, Debug)]
pub struct Number {
    value: Rational,
    places: Option<u32>,
}

impl Number {
    pub fn new(value: Rational) -> Self {
        Number { value, places: None }
    }

    pub fn with_places(value: Rational, places: u32) -> Self {
        Number {
            value,
            places: Some(places),
        }
    }

    pub fn from_i64(n: i64) -> Self {
        Number::new(Rational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Number::new(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        Number::new(Rational::zero())
    }

    pub fn one() -> Self {
        Number::new(Rational::one())
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn places(&self) -> Option<u32> {
        self.places
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// True only for an exact one; an approximated `1.00` is kept visible.
    pub fn is_one(&self) -> bool {
        self.places.is_none() && self.value.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.value.is_integer()
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.value.is_integer() {
            self.value.numer().to_i64()
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    fn merge_places(a: Option<u32>, b: Option<u32>) -> Option<u32> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    pub fn add(&self, other: &Number) -> Number {
        Number {
            value: &self.value + &other.value,
            places: Self::merge_places(self.places, other.places),
        }
    }

    pub fn mul(&self, other: &Number) -> Number {
        Number {
            value: &self.value * &other.value,
            places: Self::merge_places(self.places, other.places),
        }
    }

    pub fn neg(&self) -> Number {
        Number {
            value: -&self.value,
            places: self.places,
        }
    }

    pub fn recip(&self) -> Result<Number, MathError> {
        if self.value.is_zero() {
            return Err(MathError::DivisionByZero);
        }
        Ok(Number {
            value: self.value.recip(),
            places: self.places,
        })
    }

    pub fn div(&self, other: &Number) -> Result<Number, MathError> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow(&self, exp: i64) -> Result<Number, MathError> {
        if exp.abs() > MAX_NUMERIC_EXPONENT {
            return Err(MathError::ExponentTooLarge(exp));
        }
        if exp < 0 && self.value.is_zero() {
            return Err(MathError::DivisionByZero);
        }
        Ok(Number {
            value: num_traits::pow::Pow::pow(&self.value, exp as i32),
            places: self.places,
        })
    }

    /// Rounds half away from zero to `places` decimal places.
    pub fn round_to(&self, places: u32) -> Number {
        Number::with_places(round_half_away(&self.value, places), places)
    }

    /// Parses a literal such as `42` or `4.2` into an exact value.
    pub fn parse_literal(text: &str) -> Option<Number> {
        let (int_part, frac_part) = match text.split_once('.') {
            Some((i, f)) => (i, f),
            None => (text, ""),
        };
        if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        if !frac_part.bytes().all(|b| b.is_ascii_digit()) || (text.contains('.') && frac_part.is_empty()) {
            return None;
        }
        let digits = format!("{int_part}{frac_part}");
        let numer: BigInt = digits.parse().ok()?;
        let denom = num_traits::pow(BigInt::from(10), frac_part.len());
        Some(Number::new(Rational::new(numer, denom)))
    }

    /// Formats a decimal-place number as e.g. `4.66`; exact numbers give `None`.
    pub fn decimal_text(&self) -> Option<String> {
        self.places.map(|p| format_decimal(&self.value, p))
    }
}

pub(crate) fn round_half_away(value: &Rational, places: u32) -> Rational {
    let scale = num_traits::pow(BigInt::from(10), places as usize);
    let scaled = value * Rational::from_integer(scale.clone());
    // Ratio::round rounds half-way cases away from zero.
    Rational::new(scaled.round().to_integer(), scale)
}

fn format_decimal(value: &Rational, places: u32) -> String {
    let rounded = round_half_away(value, places);
    let scale = num_traits::pow(BigInt::from(10), places as usize);
    let scaled = (rounded * Rational::from_integer(scale.clone())).to_integer();
    let negative = scaled.is_negative();
    let (int_part, frac_part) = scaled.abs().div_rem(&scale);
    let sign = if negative { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!(
            "{sign}{int_part}.{:0>width$}",
            frac_part.to_string(),
            width = places as usize
        )
    }
}

impl PartialEq for Number {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for Number {}

impl PartialOrd for Number {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Number {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value)
    }
}

impl Hash for Number {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

impl From<i64> for Number {
    fn from(n: i64) -> Self {
        Number::from_i64(n)
    }
}

impl From<Rational> for Number {
    fn from(r: Rational) -> Self {
        Number::new(r)
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.decimal_text() {
            Some(text) => f.write_str(&text),
            None => write!(f, "{}", self.value),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(Number::parse_literal("4.2").unwrap(), Number::ratio(21, 5));
        assert_eq!(Number::parse_literal("2300").unwrap(), Number::from_i64(2300));
        assert_eq!(Number::parse_literal("0.50").unwrap(), Number::ratio(1, 2));
        assert!(Number::parse_literal("4.").is_none());
        assert!(Number::parse_literal(".5").is_none());
    }

    #[test]
    fn rounding_is_half_away_from_zero() {
        assert_eq!(Number::ratio(1071, 230).round_to(2).decimal_text().unwrap(), "4.66");
        assert_eq!(Number::ratio(5, 2).round_to(0).decimal_text().unwrap(), "3");
        assert_eq!(Number::ratio(-5, 2).round_to(0).decimal_text().unwrap(), "-3");
        assert_eq!(Number::ratio(1, 8).round_to(2).decimal_text().unwrap(), "0.13");
        assert_eq!(Number::from_i64(2).round_to(2).decimal_text().unwrap(), "2.00");
        assert_eq!(Number::ratio(-1, 200).round_to(2).decimal_text().unwrap(), "-0.01");
    }

    #[test]
    fn places_do_not_affect_equality() {
        assert_eq!(Number::ratio(233, 50).round_to(2), Number::ratio(233, 50));
        assert!(!Number::one().round_to(2).is_one());
    }

    #[test]
    fn zero_has_no_reciprocal() {
        assert_eq!(Number::zero().recip(), Err(MathError::DivisionByZero));
        assert_eq!(Number::zero().pow(-1), Err(MathError::DivisionByZero));
        assert!(Number::from_i64(2).pow(100_000).is_err());
    }
}
