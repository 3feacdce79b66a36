//! Exact rational utilities and their integer fast path.
//!
//! Utilities are stored as [`Rational`] (arbitrary precision, always in
//! lowest terms). The exhaustive searches convert one agent's vector to
//! integers over a common denominator so that comparisons inside tight loops
//! are plain `u128` arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Sums of converted values must stay below this so that adding a whole
/// vector never overflows.
const WEIGHT_CEILING: u128 = 1 << 100;

/// Parses `"num/den"` or an integer shorthand such as `"5"`.
pub fn parse(text: &str) -> std::result::Result<Rational, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| format!("bad numerator in {text:?}"))?;
    let den: BigInt = den.parse().map_err(|_| format!("bad denominator in {text:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {text:?}"));
    }
    if den.is_negative() {
        return Err(format!("negative denominator in {text:?}"));
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form, always `num/den` (integers get `/1`).
pub fn format(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn from_int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn from_frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn sum<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values.into_iter().fold(Rational::zero(), |acc, v| acc + v)
}

/// One agent's utilities scaled to integers: `value[i] = weights[i] / denom`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerWeights {
    pub weights: Vec<u128>,
    pub denom: BigInt,
}

impl IntegerWeights {
    pub fn from_rationals(values: &[Rational]) -> Result<Self> {
        let denom = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let mut total: u128 = 0;
        let mut weights = Vec::with_capacity(values.len());
        for v in values {
            if v.is_negative() {
                return Err(Error::Overflow("negative utility".into()));
            }
            let scaled = v.numer() * (&denom / v.denom());
            let w = scaled
                .to_u128()
                .filter(|w| *w < WEIGHT_CEILING)
                .ok_or_else(|| Error::Overflow(format!("scaled utility {scaled} too large")))?;
            total = total
                .checked_add(w)
                .filter(|t| *t < WEIGHT_CEILING)
                .ok_or_else(|| Error::Overflow("total utility too large".into()))?;
            weights.push(w);
        }
        Ok(IntegerWeights { weights, denom })
    }

    pub fn to_rational(&self, weight: u128) -> Rational {
        Rational::new(BigInt::from(weight), self.denom.clone())
    }

    /// Smallest integer weight `w` with `w / denom >= value`.
    pub fn ceil_weight(&self, value: &Rational) -> u128 {
        let scaled = value * Rational::from_integer(self.denom.clone());
        scaled.ceil().to_integer().to_u128().unwrap_or(u128::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_shorthand_parses() {
        assert_eq!(parse("5").unwrap(), from_int(5));
        assert_eq!(format(&parse("5").unwrap()), "5/1");
    }

    #[test]
    fn fractions_are_reduced() {
        assert_eq!(format(&parse("6/4").unwrap()), "3/2");
        assert_eq!(format(&parse(" 0/7 ").unwrap()), "0/1");
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert!(parse("3/0").is_err());
        assert!(parse("1/-2").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn weights_share_a_denominator() {
        let w = IntegerWeights::from_rationals(&[from_frac(1, 3), from_frac(1, 2), from_int(2)]).unwrap();
        assert_eq!(w.weights, vec![2, 3, 12]);
        assert_eq!(w.denom, BigInt::from(6));
        assert_eq!(w.to_rational(3), from_frac(1, 2));
        assert_eq!(w.ceil_weight(&from_frac(1, 4)), 2);
        assert_eq!(w.ceil_weight(&from_frac(1, 3)), 2);
    }
}
