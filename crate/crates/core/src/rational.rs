//! Exact rationals and the small helpers the rest of the crate needs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{DacError, Result};

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn half() -> Q {
    q(1, 2)
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// The exact binary value of a finite float.
pub fn from_f64(x: f64) -> Result<Q> {
    Q::from_float(x).ok_or_else(|| DacError::InvalidArgument(format!("{x} is not finite")))
}

pub fn pow(x: &Q, n: u64) -> Q {
    // powers of a reduced fraction stay reduced, so skip the gcd
    let e = u32::try_from(n).expect("exponent fits in u32");
    Q::new_raw(x.numer().pow(e), x.denom().pow(e))
}

pub fn in_unit(x: &Q) -> bool {
    !x.is_negative() && x <= &Q::one()
}

pub fn check_unit(name: &'static str, x: &Q) -> Result<()> {
    if in_unit(x) {
        Ok(())
    } else {
        Err(DacError::ParameterRange {
            name,
            value: x.to_string(),
        })
    }
}

/// Parses `a/b`, an integer, or a decimal such as `0.333` (read exactly as
/// `333/1000`).
pub fn parse(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || DacError::InvalidArgument(format!("cannot read {s:?} as a rational"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let d = num_traits::pow::pow(BigInt::from(10), frac.len());
    let x = Q::new(n, d);
    Ok(if neg { -x } else { x })
}

/// `a/b` form, or the plain integer when the denominator is 1.
pub fn show(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse("1/3").unwrap(), q(1, 3));
        assert_eq!(parse("0.333").unwrap(), q(333, 1000));
        assert_eq!(parse("0.5").unwrap(), half());
        assert_eq!(parse("2").unwrap(), int(2));
        assert_eq!(parse(".25").unwrap(), q(1, 4));
        assert_eq!(parse("-0.5").unwrap(), q(-1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("").is_err());
        assert!(parse("1e3").is_err());
    }

    #[test]
    fn show_reduces() {
        assert_eq!(show(&q(2, 4)), "1/2");
        assert_eq!(show(&q(4, 2)), "2");
    }

    #[test]
    fn float_conversion_is_exact() {
        assert_eq!(from_f64(0.25).unwrap(), q(1, 4));
        assert!(from_f64(f64::NAN).is_err());
    }
}
