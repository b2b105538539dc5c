//! Exact integers and rationals, plus arbitrary-precision approximate reals
//! and complex numbers with explicit error radii.

mod complex;
mod real;

pub use complex::ComplexApprox;
pub use real::{Real, MIN_PREC};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Unbounded signed integer.
pub type Integer = BigInt;
/// Exact rational in canonical form (positive denominator, reduced).
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericError {
    #[error("division by zero")]
    ZeroDivision,
    #[error("cannot parse {0:?} as a number")]
    Parse(String),
    #[error("divisor interval contains zero")]
    DivisorContainsZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn rat_arith(op: RatOp, x: &Rational, y: &Rational) -> Result<Rational, NumericError> {
    Ok(match op {
        RatOp::Add => x + y,
        RatOp::Sub => x - y,
        RatOp::Mul => x * y,
        RatOp::Div => {
            if y.is_zero() {
                return Err(NumericError::ZeroDivision);
            }
            x / y
        }
    })
}

pub fn parse_integer(text: &str) -> Result<Integer, NumericError> {
    let t = text.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    t.parse::<BigInt>().map_err(|_| NumericError::Parse(text.to_string()))
}

/// Parses `"-7"`, `"22/7"` or a plain decimal such as `"0.125"`.
pub fn parse_rational(text: &str) -> Result<Rational, NumericError> {
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n = parse_integer(n)?;
        let d = parse_integer(d)?;
        if d.is_zero() {
            return Err(NumericError::ZeroDivision);
        }
        return Ok(Rational::new(n, d));
    }
    if t.contains(['.', 'e', 'E']) {
        return parse_decimal(t);
    }
    parse_integer(t).map(Rational::from_integer)
}

/// Exact value of a decimal literal like `-1.25e-3`.
pub fn parse_decimal(text: &str) -> Result<Rational, NumericError> {
    let err = || NumericError::Parse(text.to_string());
    let t = text.trim();
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| err())? };
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

pub fn is_integral(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Least common multiple of the denominators.
pub fn denominator_lcm<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> Integer {
    qs.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Gcd of the absolute values; zero for an empty or all-zero input.
pub fn integer_content<'a>(xs: impl IntoIterator<Item = &'a Integer>) -> Integer {
    xs.into_iter().fold(BigInt::zero(), |acc, x| acc.gcd(x)).abs()
}

pub fn factorial(n: u64) -> Integer {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> Integer {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn rational_examples() {
        assert_eq!(rat_arith(RatOp::Add, &q("1/2"), &q("1/3")).unwrap(), q("5/6"));
        assert_eq!(rat_arith(RatOp::Mul, &q("2/4"), &q("2")).unwrap(), q("1"));
        let third = rat_arith(RatOp::Div, &q("1"), &q("3")).unwrap();
        assert_eq!(rat_arith(RatOp::Mul, &third, &q("3")).unwrap(), q("1"));
        assert_eq!(rat_arith(RatOp::Div, &q("1"), &q("0")), Err(NumericError::ZeroDivision));
    }

    #[test]
    fn canonical_strings() {
        assert_eq!(q("-14/4").to_string(), "-7/2");
        assert_eq!(q("6/-3").to_string(), "-2");
        assert_eq!(q("-0").to_string(), "0");
        assert_eq!(q("22/7").to_string(), "22/7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(q("0.125"), q("1/8"));
        assert_eq!(q("-1.5e2"), q("-150"));
        assert_eq!(q("2.5e-1"), q("1/4"));
        assert!(parse_decimal(".").is_err());
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(10), BigInt::from(3_628_800));
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(3, 5), BigInt::zero());
    }
}
