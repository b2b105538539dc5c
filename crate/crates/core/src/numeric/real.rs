use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Smallest precision accepted anywhere in the crate.
pub const MIN_PREC: u32 = 64;

/// Binary fixed-point real: the value is `mant * 2^-prec`.
///
/// The integer part is unbounded, so the absolute resolution is always
/// `2^-prec` regardless of magnitude. Addition and subtraction at equal
/// precision are exact; products and quotients round to the larger operand
/// precision.
#[derive(Clone, Debug)]
pub struct Real {
    mant: BigInt,
    prec: u32,
}

fn shr_round(m: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return m.clone();
    }
    let half = BigInt::one() << (k - 1);
    (m + half) >> k
}

fn shr_ceil(m: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return m.clone();
    }
    -((-m) >> k)
}

impl Real {
    pub fn zero(prec: u32) -> Self {
        Real { mant: BigInt::zero(), prec }
    }

    pub fn one(prec: u32) -> Self {
        Real { mant: BigInt::one() << prec, prec }
    }

    pub fn from_raw(mant: BigInt, prec: u32) -> Self {
        Real { mant, prec }
    }

    pub fn from_integer(n: &BigInt, prec: u32) -> Self {
        Real { mant: n << prec, prec }
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_integer(&BigInt::from(n), prec)
    }

    /// Nearest representable value.
    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let num = q.numer() << (prec + 1);
        let twice = num / q.denom();
        // twice = floor-toward-zero of 2*value*2^prec; round half away from zero
        let mant = if twice.is_negative() { -((-twice + 1i32) >> 1u32) } else { (twice + 1i32) >> 1u32 };
        Real { mant, prec }
    }

    /// Smallest representable value that is >= q.
    pub fn from_rational_up(q: &BigRational, prec: u32) -> Self {
        let num = q.numer() << prec;
        let (quot, rem) = num_integer::Integer::div_mod_floor(&num, q.denom());
        let mant = if rem.is_zero() { quot } else { quot + 1 };
        Real { mant, prec }
    }

    /// Exact conversion of a finite f64, rounded to `prec` bits.
    pub fn from_f64(x: f64, prec: u32) -> Self {
        if x == 0.0 || !x.is_finite() {
            return Real::zero(prec);
        }
        let bits = x.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        let mut mant = BigInt::from(m);
        if x < 0.0 {
            mant = -mant;
        }
        let shift = e + prec as i64;
        let mant = if shift >= 0 { mant << (shift as u32) } else { shr_round(&mant, (-shift) as u32) };
        Real { mant, prec }
    }

    /// `2^e`, rounded up to at least one ulp.
    pub fn pow2_up(e: i64, prec: u32) -> Self {
        let shift = e + prec as i64;
        let mant = if shift >= 0 { BigInt::one() << (shift as u32) } else { BigInt::one() };
        Real { mant, prec }
    }

    pub fn ulp(prec: u32) -> Self {
        Real { mant: BigInt::one(), prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        Real { mant: self.mant.abs(), prec: self.prec }
    }

    /// Re-express at a different precision, rounding to nearest when bits are dropped.
    pub fn with_prec(&self, prec: u32) -> Self {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => Real { mant: &self.mant << (prec - self.prec), prec },
            Ordering::Less => Real { mant: shr_round(&self.mant, self.prec - prec), prec },
        }
    }

    /// Like `with_prec` but never decreases the value.
    pub fn with_prec_up(&self, prec: u32) -> Self {
        if prec >= self.prec {
            self.with_prec(prec)
        } else {
            Real { mant: shr_ceil(&self.mant, self.prec - prec), prec }
        }
    }

    fn aligned(&self, other: &Real) -> (BigInt, BigInt, u32) {
        let p = self.prec.max(other.prec);
        (&self.mant << (p - self.prec), &other.mant << (p - other.prec), p)
    }

    pub fn mul(&self, other: &Real) -> Real {
        let p = self.prec.max(other.prec);
        let prod = &self.mant * &other.mant;
        Real { mant: shr_round(&prod, self.prec + other.prec - p), prec: p }
    }

    /// Product rounded toward +infinity.
    pub fn mul_up(&self, other: &Real) -> Real {
        let p = self.prec.max(other.prec);
        let prod = &self.mant * &other.mant;
        Real { mant: shr_ceil(&prod, self.prec + other.prec - p), prec: p }
    }

    pub fn mul_int(&self, n: &BigInt) -> Real {
        Real { mant: &self.mant * n, prec: self.prec }
    }

    /// Multiplication by `2^k`; exact for k >= 0.
    pub fn mul_pow2(&self, k: i64) -> Real {
        if k >= 0 {
            Real { mant: &self.mant << (k as u32), prec: self.prec }
        } else {
            Real { mant: shr_round(&self.mant, (-k) as u32), prec: self.prec }
        }
    }

    /// Quotient truncated toward zero; `None` for a zero divisor.
    pub fn div(&self, other: &Real) -> Option<Real> {
        if other.mant.is_zero() {
            return None;
        }
        let p = self.prec.max(other.prec);
        let num = &self.mant << (p + other.prec - self.prec);
        Some(Real { mant: num / &other.mant, prec: p })
    }

    /// Quotient of non-negative values rounded up.
    pub fn div_up(&self, other: &Real) -> Option<Real> {
        if other.mant.is_zero() {
            return None;
        }
        let p = self.prec.max(other.prec);
        let num = &self.mant << (p + other.prec - self.prec);
        let (q, r) = num_integer::Integer::div_mod_floor(&num, &other.mant);
        Some(Real { mant: if r.is_zero() { q } else { q + 1 }, prec: p })
    }

    pub fn div_int(&self, n: &BigInt) -> Real {
        Real { mant: &self.mant / n, prec: self.prec }
    }

    /// Floor square root of a non-negative value (negative inputs give zero).
    pub fn sqrt(&self) -> Real {
        if self.mant.sign() != Sign::Plus {
            return Real::zero(self.prec);
        }
        Real { mant: (&self.mant << self.prec).sqrt(), prec: self.prec }
    }

    /// Square root rounded up.
    pub fn sqrt_up(&self) -> Real {
        let mut s = self.sqrt();
        if self.mant.sign() == Sign::Plus {
            s.mant += 1;
        }
        s
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mant.clone(), BigInt::one() << self.prec)
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits() as i64;
        // keep ~64 significant bits before converting
        let drop = (bits - 64).max(0);
        let m = (&self.mant >> (drop as u32)).to_f64().unwrap_or(0.0);
        let e = drop - self.prec as i64;
        m * 2f64.powi(e.clamp(-1074, 1023) as i32)
    }

    /// Upper estimate of log2 |x|; `None` for zero.
    pub fn log2_upper(&self) -> Option<i64> {
        if self.mant.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 - self.prec as i64)
        }
    }

    /// Decimal rendering with exactly `digits` fractional digits (rounded).
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10), digits);
        let scaled = shr_round(&(&self.mant * scale), self.prec);
        let neg = scaled.is_negative();
        let s = scaled.abs().to_string();
        let s = if s.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - s.len()), s) } else { s };
        let (int_part, frac_part) = s.split_at(s.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }

    /// Number of decimal digits that `prec` bits resolve.
    pub fn decimal_digits(prec: u32) -> usize {
        (prec as f64 * std::f64::consts::LOG10_2).floor() as usize
    }

    /// pi by Machin's formula, correct to within a few ulp.
    pub fn pi(prec: u32) -> Real {
        let w = prec + 32;
        let atan_inv = |n: u64| -> BigInt {
            // atan(1/n) * 2^w via the alternating Taylor series
            let n2 = BigInt::from(n * n);
            let mut term = (BigInt::one() << w) / n;
            let mut sum = term.clone();
            let mut k = 1u64;
            loop {
                term /= &n2;
                if term.is_zero() {
                    break;
                }
                let t = &term / (2 * k + 1);
                if k % 2 == 1 {
                    sum -= t;
                } else {
                    sum += t;
                }
                k += 1;
            }
            sum
        };
        let mant = atan_inv(5) * 16 - atan_inv(239) * 4;
        Real { mant, prec: w }.with_prec(prec)
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Real {}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl Add for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        let (a, b, p) = self.aligned(rhs);
        Real { mant: a + b, prec: p }
    }
}

impl Sub for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        let (a, b, p) = self.aligned(rhs);
        Real { mant: a - b, prec: p }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { mant: -&self.mant, prec: self.prec }
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { mant: -self.mant, prec: self.prec }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [prec={}]", self.to_decimal_string(Real::decimal_digits(self.prec)), self.prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::parse_rational;

    #[test]
    fn rational_round_trip_is_nearest() {
        let q = parse_rational("1/3").unwrap();
        let r = Real::from_rational(&q, 128);
        let back = r.to_rational();
        let diff = (back - &q).abs();
        assert!(diff <= BigRational::new(BigInt::one(), BigInt::one() << 129));
        let neg = Real::from_rational(&-q.clone(), 128);
        assert_eq!(neg, -&r);
    }

    #[test]
    fn arithmetic_basics() {
        let p = 96;
        let two = Real::from_i64(2, p);
        let s = two.sqrt();
        let sq = s.mul(&s);
        assert!((&sq - &two).abs() <= Real::from_raw(BigInt::from(4), p));
        let third = Real::one(p).div(&Real::from_i64(3, p)).unwrap();
        assert!((third.to_f64() - 1.0 / 3.0).abs() < 1e-15);
        assert!(Real::one(p).div(&Real::zero(p)).is_none());
    }

    #[test]
    fn f64_conversion() {
        for x in [0.5, -3.25, 1e-10, 123456.789] {
            assert_eq!(Real::from_f64(x, 200).to_f64(), x);
        }
    }

    #[test]
    fn decimal_printing() {
        let r = Real::from_rational(&parse_rational("-1/8").unwrap(), 64);
        assert_eq!(r.to_decimal_string(4), "-0.1250");
        assert_eq!(Real::from_i64(7, 64).to_decimal_string(0), "7");
        assert!(Real::from_i64(1, 64).to_string().ends_with("[prec=64]"));
    }

    #[test]
    fn pi_digits() {
        let pi = Real::pi(256);
        assert!(pi.to_decimal_string(60).starts_with("3.14159265358979323846264338327950288419716939937510"));
    }

    #[test]
    fn mixed_precision_takes_the_larger() {
        let a = Real::from_i64(1, 64);
        let b = Real::from_i64(1, 128);
        assert_eq!((&a + &b).prec(), 128);
        assert_eq!(a.mul(&b).prec(), 128);
    }
}
