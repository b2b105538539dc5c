use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use super::real::Real;
use super::NumericError;

/// A complex number known to lie within `err` of the center `re + i*im`.
///
/// Every operation propagates the radius outward so that the true result of
/// the operation on any values inside the input disks lies inside the output
/// disk. Rounding of the centers is charged to the radius as a few ulp.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexApprox {
    re: Real,
    im: Real,
    err: Real,
}

impl ComplexApprox {
    pub fn new(re: Real, im: Real, err: Real) -> Self {
        let p = re.prec().max(im.prec()).max(err.prec());
        ComplexApprox { re: re.with_prec(p), im: im.with_prec(p), err: err.with_prec_up(p) }
    }

    pub fn exact(re: Real, im: Real) -> Self {
        let p = re.prec().max(im.prec());
        Self::new(re, im, Real::zero(p))
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact(Real::zero(prec), Real::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::exact(Real::one(prec), Real::zero(prec))
    }

    pub fn i(prec: u32) -> Self {
        Self::exact(Real::zero(prec), Real::one(prec))
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Self::from_rationals(q, &BigRational::zero(), prec)
    }

    pub fn from_rationals(re: &BigRational, im: &BigRational, prec: u32) -> Self {
        let r = Real::from_rational(re, prec);
        let i = Real::from_rational(im, prec);
        let exact = &r.to_rational() == re && &i.to_rational() == im;
        let err = if exact { Real::zero(prec) } else { Real::ulp(prec) };
        Self::new(r, i, err)
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Self::exact(Real::from_f64(re, prec), Real::from_f64(im, prec))
    }

    pub fn re(&self) -> &Real {
        &self.re
    }

    pub fn im(&self) -> &Real {
        &self.im
    }

    pub fn err(&self) -> &Real {
        &self.err
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn center(&self) -> ComplexApprox {
        Self::exact(self.re.clone(), self.im.clone())
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        if prec >= self.prec() {
            return Self::new(self.re.with_prec(prec), self.im.with_prec(prec), self.err.clone());
        }
        let re = self.re.with_prec(prec);
        let im = self.im.with_prec(prec);
        let err = &self.err.with_prec_up(prec) + &Real::ulp(prec);
        Self::new(re, im, err)
    }

    /// Same center with the radius enlarged by `extra`.
    pub fn widen(&self, extra: &Real) -> Self {
        Self::new(self.re.clone(), self.im.clone(), &self.err + extra)
    }

    pub fn with_err(&self, err: Real) -> Self {
        Self::new(self.re.clone(), self.im.clone(), err)
    }

    fn ulps(&self, n: i64) -> Real {
        Real::from_raw(BigInt::from(n), self.prec())
    }

    /// Exact `re^2 + im^2` at twice the precision.
    fn norm_sqr_exact(&self) -> Real {
        let p2 = 2 * self.prec();
        let re = self.re.with_prec(p2);
        let im = self.im.with_prec(p2);
        &re.mul(&re) + &im.mul(&im)
    }

    /// Upper bound on |center|.
    pub fn abs_upper(&self) -> Real {
        self.norm_sqr_exact().sqrt_up().with_prec_up(self.prec())
    }

    /// Lower bound on |center|.
    pub fn abs_center_lower(&self) -> Real {
        let s = &self.norm_sqr_exact().sqrt().with_prec(self.prec()) - &self.ulps(1);
        if s.is_negative() {
            Real::zero(self.prec())
        } else {
            s
        }
    }

    /// Upper bound on |z| over the whole disk.
    pub fn magnitude_upper(&self) -> Real {
        &self.abs_upper() + &self.err
    }

    /// Lower bound on |z| over the whole disk (zero if the disk reaches 0).
    pub fn magnitude_lower(&self) -> Real {
        let s = &self.abs_center_lower() - &self.err;
        if s.is_negative() {
            Real::zero(self.prec())
        } else {
            s
        }
    }

    /// Upper bound on the distance between the two centers.
    pub fn center_distance_upper(&self, other: &ComplexApprox) -> Real {
        Self::exact(&self.re - &other.re, &self.im - &other.im).abs_upper()
    }

    /// Lower bound on the distance between the two centers.
    pub fn center_distance_lower(&self, other: &ComplexApprox) -> Real {
        Self::exact(&self.re - &other.re, &self.im - &other.im).abs_center_lower()
    }

    /// Whether the two disks can share a point.
    pub fn overlaps(&self, other: &ComplexApprox) -> bool {
        self.center_distance_lower(other) <= &self.err + &other.err
    }

    /// Whether this disk lies inside `outer`.
    pub fn inside(&self, outer: &ComplexApprox) -> bool {
        &self.center_distance_upper(outer) + &self.err <= outer.err
    }

    pub fn contains_zero(&self) -> bool {
        self.abs_center_lower() <= self.err
    }

    pub fn add(&self, o: &ComplexApprox) -> ComplexApprox {
        Self::new(&self.re + &o.re, &self.im + &o.im, &self.err + &o.err)
    }

    pub fn sub(&self, o: &ComplexApprox) -> ComplexApprox {
        Self::new(&self.re - &o.re, &self.im - &o.im, &self.err + &o.err)
    }

    pub fn neg(&self) -> ComplexApprox {
        Self::new(-&self.re, -&self.im, self.err.clone())
    }

    pub fn conj(&self) -> ComplexApprox {
        Self::new(self.re.clone(), -&self.im, self.err.clone())
    }

    pub fn mul(&self, o: &ComplexApprox) -> ComplexApprox {
        let re = &self.re.mul(&o.re) - &self.im.mul(&o.im);
        let im = &self.re.mul(&o.im) + &self.im.mul(&o.re);
        let p = re.prec();
        let mut err = Real::from_raw(BigInt::from(3), p);
        if !self.err.is_zero() || !o.err.is_zero() {
            err = &err + &self.abs_upper().mul_up(&o.err);
            err = &err + &o.abs_upper().mul_up(&self.err);
            err = &err + &self.err.mul_up(&o.err);
        }
        Self::new(re, im, err)
    }

    pub fn square(&self) -> ComplexApprox {
        self.mul(self)
    }

    pub fn mul_real(&self, x: &Real) -> ComplexApprox {
        let abs_x = x.abs();
        let err = &self.err.mul_up(&abs_x) + &self.ulps(2);
        Self::new(self.re.mul(x), self.im.mul(x), err)
    }

    pub fn mul_rational(&self, q: &BigRational) -> ComplexApprox {
        self.mul(&ComplexApprox::from_rational(q, self.prec()))
    }

    pub fn mul_int(&self, n: &BigInt) -> ComplexApprox {
        let an = num_traits::Signed::abs(n);
        Self::new(self.re.mul_int(n), self.im.mul_int(n), self.err.mul_int(&an))
    }

    /// Quotient; fails when the divisor disk contains zero.
    pub fn div(&self, o: &ComplexApprox) -> Result<ComplexApprox, NumericError> {
        let p = self.prec().max(o.prec());
        let lower = o.magnitude_lower();
        if lower.is_zero() {
            return Err(NumericError::DivisorContainsZero);
        }
        let scale = (-lower.log2_upper().unwrap_or(0)).max(0) as u32;
        let w = p + 32 + 2 * scale;
        let a = self.with_prec(w);
        let b = o.with_prec(w);
        let den = &b.re.mul(&b.re) + &b.im.mul(&b.im);
        let nr = &a.re.mul(&b.re) + &a.im.mul(&b.im);
        let ni = &a.im.mul(&b.re) - &a.re.mul(&b.im);
        let qr = nr.div(&den).ok_or(NumericError::DivisorContainsZero)?;
        let qi = ni.div(&den).ok_or(NumericError::DivisorContainsZero)?;
        let q = ComplexApprox::exact(qr, qi);
        let mut err = Real::from_raw(BigInt::from(2), p);
        if !self.err.is_zero() || !o.err.is_zero() {
            // |A/B - a/b| <= (|a| eb + ea |b|) / (|b| (|b| - eb))
            let num = &self.abs_upper().mul_up(&o.err) + &o.abs_upper().mul_up(&self.err);
            let bl = o.abs_center_lower().with_prec(w);
            let den = bl.mul(&lower.with_prec(w));
            err = &err + &num.with_prec(w).div_up(&den).ok_or(NumericError::DivisorContainsZero)?;
        }
        Ok(ComplexApprox::new(q.re.with_prec(p), q.im.with_prec(p), err.with_prec_up(p)))
    }

    pub fn recip(&self) -> Result<ComplexApprox, NumericError> {
        ComplexApprox::one(self.prec()).div(self)
    }

    pub fn pow(&self, e: u32) -> ComplexApprox {
        let mut acc = ComplexApprox::one(self.prec());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Principal square root: non-negative real part, and non-negative
    /// imaginary part on the negative real axis.
    ///
    /// The radius bound assumes the disk does not straddle the branch cut.
    pub fn sqrt(&self) -> ComplexApprox {
        let p = self.prec();
        let w = p + 32;
        let x = self.re.with_prec(w);
        let y = self.im.with_prec(w);
        if x.is_zero() && y.is_zero() {
            let err = if self.err.is_zero() { Real::zero(p) } else { &self.err.sqrt_up() + &Real::ulp(p) };
            return ComplexApprox::new(Real::zero(p), Real::zero(p), err);
        }
        let r = (&x.mul(&x) + &y.mul(&y)).sqrt();
        let two = Real::from_i64(2, w);
        let (u, v) = if !x.is_negative() {
            let u = (&r + &x).div(&two).unwrap().sqrt();
            let v = y.div(&u.mul(&two)).unwrap_or_else(|| Real::zero(w));
            (u, v)
        } else {
            let t = (&r - &x).div(&two).unwrap().sqrt();
            let u = y.abs().div(&t.mul(&two)).unwrap_or_else(|| Real::zero(w));
            let v = if y.is_negative() { -t } else { t };
            (u, v)
        };
        let mut err = Real::from_raw(BigInt::from(3), p);
        if !self.err.is_zero() {
            let by_sqrt = self.err.sqrt_up();
            let rl = self.abs_center_lower();
            let bound = if rl > self.err.mul_pow2(2) {
                // |sqrt(a) - sqrt(b)| <= |a - b| / (|sqrt a| + |sqrt b|)
                let s = (&rl - &self.err).sqrt();
                match self.err.div_up(&s) {
                    Some(b) => b.min(by_sqrt),
                    None => by_sqrt,
                }
            } else {
                by_sqrt
            };
            err = &err + &bound;
        }
        ComplexApprox::new(u.with_prec(p), v.with_prec(p), err)
    }

    pub fn exp(&self, prec: u32) -> ComplexApprox {
        complex_exp(self, prec)
    }
}

/// `e^z` with the radius bound `2 ulp * (1 + |e^z|)` for an exact input,
/// plus the propagated input radius.
pub fn complex_exp(z: &ComplexApprox, prec: u32) -> ComplexApprox {
    let prec = prec.max(super::MIN_PREC);
    let zc = z.to_c64();
    let mag = zc.norm();
    let s: u32 = if mag < 1.0 / 256.0 { 0 } else { (mag.log2().ceil() as i64 + 8).max(0) as u32 };
    let neg_re = (-zc.re).max(0.0);
    let w = prec + 64 + s + (neg_re * std::f64::consts::LOG2_E).ceil() as u32;
    let t_re = z.re.with_prec(w).mul_pow2(-(s as i64));
    let t_im = z.im.with_prec(w).mul_pow2(-(s as i64));

    // Taylor series at |t| <= 2^-8
    let mut sum_re = Real::one(w);
    let mut sum_im = Real::zero(w);
    let mut term_re = Real::one(w);
    let mut term_im = Real::zero(w);
    let mut k: i64 = 1;
    loop {
        let nr = &term_re.mul(&t_re) - &term_im.mul(&t_im);
        let ni = &term_re.mul(&t_im) + &term_im.mul(&t_re);
        let kk = BigInt::from(k);
        term_re = nr.div_int(&kk);
        term_im = ni.div_int(&kk);
        if term_re.is_zero() && term_im.is_zero() {
            break;
        }
        sum_re = &sum_re + &term_re;
        sum_im = &sum_im + &term_im;
        k += 1;
    }
    for _ in 0..s {
        let nr = &sum_re.mul(&sum_re) - &sum_im.mul(&sum_im);
        let ni = sum_re.mul(&sum_im).mul_pow2(1);
        sum_re = nr;
        sum_im = ni;
    }
    let center = ComplexApprox::exact(sum_re.with_prec(prec), sum_im.with_prec(prec));
    let abs_w = center.abs_upper();
    let two_ulp = Real::from_raw(BigInt::from(2), prec);
    let mut err = (&Real::one(prec) + &abs_w).mul_up(&two_ulp);
    let eps = z.err.with_prec_up(prec);
    if !eps.is_zero() {
        let growth = if eps <= Real::one(prec) {
            // e^eps - 1 <= 2 eps for eps <= 1
            eps.mul_pow2(1)
        } else {
            let f = eps.to_f64().exp() * 1.01;
            Real::from_f64(f, prec)
        };
        err = &err + &abs_w.mul_up(&growth);
        err = &err + &growth.mul_up(&two_ulp);
    }
    center.with_err(err)
}

impl fmt::Display for ComplexApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = Real::decimal_digits(self.prec()).min(40);
        let im = self.im.to_decimal_string(digits);
        let (sign, im) = match im.strip_prefix('-') {
            Some(rest) => ("-", rest.to_string()),
            None => ("+", im),
        };
        write!(
            f,
            "{} {} {}i ± {:.3e} [prec={}]",
            self.re.to_decimal_string(digits),
            sign,
            im,
            self.err.to_f64(),
            self.prec()
        )
    }
}

impl From<&ComplexApprox> for Complex64 {
    fn from(z: &ComplexApprox) -> Self {
        z.to_c64()
    }
}
