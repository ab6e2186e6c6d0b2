use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{CarpetError, Result};

/// Arbitrary-precision rational, always kept in reduced form by `num-rational`.
pub type Rational = BigRational;

/// Parses `"p/q"` or `"p"` (optional sign, surrounding whitespace ignored).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || CarpetError::MalformedRational(text.to_string());
    if t.is_empty() || t.contains(char::is_whitespace) {
        return Err(bad());
    }
    let (num, den) = match t.split_once('/') {
        Some((p, q)) => (p, q),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() || den.sign() == num_bigint::Sign::Minus {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Least common multiple of the denominators of `values`, times `base`.
pub(crate) fn common_denominator<'a>(
    base: &BigInt,
    values: impl IntoIterator<Item = &'a Rational>,
) -> BigInt {
    values
        .into_iter()
        .fold(base.clone(), |acc, v| acc.lcm(v.denom()))
}

pub(crate) fn to_i64(v: &BigInt) -> Option<i64> {
    v.to_i64()
}

/// `v · scale` as an integer; `scale` must clear the denominator.
pub(crate) fn scaled_int(v: &Rational, scale: &BigInt) -> Option<i64> {
    let s = v * BigRational::from_integer(scale.clone());
    debug_assert!(s.is_integer());
    s.to_integer().to_i64()
}
