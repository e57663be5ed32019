//! Exact rational scalars.
//!
//! Every exponent, weight and eigenvector entry in this crate is a reduced
//! fraction of arbitrary-precision integers. Output always uses the explicit
//! `num/den` form, so integers print as `3/1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// `num / den` as a reduced rational. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn two() -> Rational {
    int(2)
}

/// Formats a rational as `num/den`, keeping `/1` for integers.
pub fn fmt_q(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Wrapper that displays a rational in the `num/den` form.
pub struct Fraction<'a>(pub &'a Rational);

impl fmt::Display for Fraction<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed rational `{}`", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

/// Parses `a`, `a/b` or a finite decimal such as `2.5`.
pub fn parse_q(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let text = text.trim();
    if text.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = text.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| err())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = whole.starts_with('-');
        let whole = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            BigInt::from_str(whole).map_err(|_| err())?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac = BigInt::from_str(frac).map_err(|_| err())?;
        let mut value = Rational::from_integer(whole.abs()) + Rational::new(frac, scale);
        if negative {
            value = -value;
        }
        return Ok(value);
    }
    BigInt::from_str(text)
        .map(Rational::from_integer)
        .map_err(|_| err())
}

/// Smallest integer not below `value`.
pub fn ceil_to_int(value: &Rational) -> BigInt {
    value.ceil().to_integer()
}

pub fn max_q(a: Rational, b: Rational) -> Rational {
    if a >= b {
        a
    } else {
        b
    }
}

/// Lossy conversion for reporting only.
pub fn to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn is_unit_interval(value: &Rational) -> bool {
    !value.is_negative() && *value <= Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_forms() {
        assert_eq!(parse_q("8/3").unwrap(), ratio(8, 3));
        assert_eq!(parse_q("24/1").unwrap(), int(24));
        assert_eq!(parse_q(" 6 ").unwrap(), int(6));
        assert_eq!(parse_q("2.5").unwrap(), ratio(5, 2));
        assert_eq!(parse_q("4/6").unwrap(), ratio(2, 3));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
        assert!(parse_q("").is_err());
        assert!(parse_q("3/").is_err());
    }

    #[test]
    fn formats_with_explicit_denominator() {
        assert_eq!(fmt_q(&int(8)), "8/1");
        assert_eq!(fmt_q(&ratio(10, 16)), "5/8");
        assert_eq!(fmt_q(&Rational::zero()), "0/1");
        assert_eq!(Fraction(&ratio(-3, 6)).to_string(), "-1/2");
    }
}
