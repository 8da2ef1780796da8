//! Exact scalar, polynomial, rational-function, matrix, series and ball
//! kernels shared by the rest of the crate.

pub mod ball;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod ratfun;
pub mod series;
pub mod upoly;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number with arbitrary-precision numerator and denominator.
///
/// `BigRational` keeps the fraction reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"-p/q"` or a decimal literal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.trim_start().starts_with('-');
        let ip_abs = ip.trim().trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{}{}", if ip_abs.is_empty() { "0" } else { ip_abs }, fp);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = Rational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Parses a comma-separated list of rationals, e.g. `"1/2,1/3"`.
pub fn parse_point(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(parse_rational).collect()
}

pub fn format_point(p: &[Rational]) -> String {
    p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Maximum norm of a point.
pub fn max_norm(p: &[Rational]) -> Rational {
    p.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
}

/// `x^e` for a possibly negative exponent; `x` must be nonzero when `e < 0`.
pub fn rat_pow(x: &Rational, e: &BigInt) -> Rational {
    let mut result = Rational::one();
    let mut base = x.clone();
    let mag = e.magnitude();
    let bits = mag.bits();
    for i in 0..bits {
        if mag.bit(i) {
            result *= &base;
        }
        if i + 1 < bits {
            base = &base * &base;
        }
    }
    if e.is_negative() {
        result.recip()
    } else {
        result
    }
}

/// Least common multiple of the denominators of a list of rationals.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Gcd of the numerators of a list of rationals (zero for an empty list).
pub fn numerator_gcd<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |acc, x| acc.gcd(x.numer()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" -4/6 ").unwrap(), rat(-2, 3));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn rational_powers() {
        assert_eq!(rat_pow(&rat(2, 3), &BigInt::from(3)), rat(8, 27));
        assert_eq!(rat_pow(&rat(2, 3), &BigInt::from(-2)), rat(9, 4));
        assert_eq!(rat_pow(&rat(5, 7), &BigInt::from(0)), int(1));
        assert_eq!(rat_pow(&rat(1, 2), &BigInt::from(64)), Rational::new(BigInt::one(), BigInt::one() << 64));
    }
}
