//! Algebraic numbers as an annihilating polynomial plus an isolating disk.
//!
//! The annihilator is kept squarefree and primitive with positive leading
//! coefficient; it is not necessarily the minimal polynomial. The disk
//! `approx` contains exactly one root of the annihilator, which is the
//! number. Every operation re-establishes that invariant by matching a
//! candidate disk against a full isolated root list, doubling the working
//! precision until the match is unique.

mod kernel;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{parse_expr, Expr, ExprError};
use crate::numeric::{parse_decimal, parse_integer, ComplexApprox, Rational, Real, MIN_PREC};
use crate::poly::{PolyError, UniPoly};
use crate::roots::{find_roots, polish_root};

/// Working precision for new values.
pub const DEFAULT_PREC: u32 = 128;
/// Identification gives up after the precision has grown by this factor.
pub const PREC_GROWTH_CAP: u32 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("could not isolate a unique root of {ann} up to {prec} bits")]
    IdentificationFailure { ann: String, prec: u32 },
    #[error("division by zero")]
    ZeroDivision,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Parse(#[from] ExprError),
    #[error("{0}")]
    Unsupported(String),
    #[error("malformed payload: {0}")]
    Payload(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicNumber {
    ann: UniPoly,
    approx: ComplexApprox,
    prec: u32,
}

/// Serialized form used inside construction certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgPayload {
    /// Annihilator coefficients, constant term first, as decimal integers.
    pub ann: Vec<String>,
    pub approx_re: String,
    pub approx_im: String,
    /// Some root of `ann` lies within `2^err_exp` of `approx_re + i approx_im`.
    pub err_exp: i64,
}

fn precision_ladder(p0: u32) -> impl Iterator<Item = u32> {
    let p0 = p0.max(MIN_PREC);
    (0..=PREC_GROWTH_CAP.trailing_zeros()).map(move |i| p0 << i)
}

/// Root disks of `ann` at `prec`, if they come out pairwise disjoint.
fn isolate(ann: &UniPoly, prec: u32) -> Option<Vec<ComplexApprox>> {
    let roots = find_roots(ann, prec).ok()?;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if roots[i].overlaps(&roots[j]) {
                return None;
            }
        }
    }
    Some(roots)
}

/// Index of the only isolated root disk that meets `z`. With `margin`, every
/// other disk must also be at least `4 * err(z)` away from `z`.
fn pick(roots: &[ComplexApprox], z: &ComplexApprox, margin: bool) -> Option<usize> {
    let mut hits = roots.iter().enumerate().filter(|(_, r)| r.overlaps(z));
    let (i, _) = hits.next()?;
    if hits.next().is_some() {
        return None;
    }
    if margin {
        let need = z.err().mul_int(&BigInt::from(4));
        for (j, r) in roots.iter().enumerate() {
            if j != i && &z.center_distance_lower(r) - r.err() < need {
                return None;
            }
        }
    }
    Some(i)
}

impl AlgebraicNumber {
    pub fn from_rational(q: &Rational) -> Self {
        Self::from_rational_prec(q, DEFAULT_PREC)
    }

    fn from_rational_prec(q: &Rational, prec: u32) -> Self {
        let ann = UniPoly::from_integers([-q.numer().clone(), q.denom().clone()]);
        AlgebraicNumber { ann, approx: ComplexApprox::from_rational(q, prec), prec }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::from_i64(0)
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    /// The root of `ann` nearest to a caller-supplied approximation. The disk
    /// `approx` must contain the intended root.
    pub fn from_root(ann: &UniPoly, approx: &ComplexApprox) -> Result<Self, AlgError> {
        let z = approx.clone();
        Self::identify(ann, &|p| Ok(z.with_prec(p.max(z.prec()))), approx.prec().max(DEFAULT_PREC))
    }

    pub fn ann(&self) -> &UniPoly {
        &self.ann
    }

    pub fn approx(&self) -> &ComplexApprox {
        &self.approx
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn degree(&self) -> usize {
        self.ann.degree().unwrap_or(0)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        (self.ann.degree() == Some(1)).then(|| -self.ann.coeff(0) / self.ann.coeff(1))
    }

    /// `|ann(approx)|` evaluated at the center of the disk.
    pub fn residual(&self) -> Real {
        self.ann.eval_approx(&self.approx.center()).magnitude_upper()
    }

    /// Normalizes `ann`, then finds the root matched by `candidate(p)` for
    /// increasing precisions `p`.
    fn identify(
        ann: &UniPoly,
        candidate: &dyn Fn(u32) -> Result<ComplexApprox, AlgError>,
        p0: u32,
    ) -> Result<Self, AlgError> {
        let ann = ann.squarefree_primitive()?;
        if ann.is_constant() {
            return Err(PolyError::ZeroPolynomial.into());
        }
        if ann.degree() == Some(1) {
            let q = -ann.coeff(0) / ann.coeff(1);
            return Ok(Self::from_rational_prec(&q, p0));
        }
        let mut last = p0;
        for p in precision_ladder(p0) {
            last = p;
            let z = candidate(p)?;
            let Some(roots) = isolate(&ann, p) else { continue };
            let Some(i) = pick(&roots, &z, true) else { continue };
            let x = AlgebraicNumber { ann, approx: roots[i].clone(), prec: p };
            return Ok(x.rationalize());
        }
        Err(AlgError::IdentificationFailure { ann: ann.to_compact_string("x"), prec: last })
    }

    /// Replaces the value by its exact rational form when it is a rational root.
    fn rationalize(self) -> Self {
        if self.degree() <= 1 {
            return self;
        }
        let lead = self.ann.leading().expect("nonzero").clone();
        let scaled = self.approx.re().to_rational() * &lead;
        let n = scaled.round();
        let q = n / lead;
        if !self.ann.eval(&q).is_zero() {
            return self;
        }
        let qz = ComplexApprox::from_rational(&q, self.prec);
        if qz.overlaps(&self.approx) {
            Self::from_rational_prec(&q, self.prec)
        } else {
            self
        }
    }

    /// Same value with the isolating disk refined for precision `prec`.
    pub fn refine_prec(&self, prec: u32) -> Result<Self, AlgError> {
        if prec <= self.prec {
            return Ok(self.clone());
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational_prec(&q, prec));
        }
        let iters = 2 * (32 - prec.leading_zeros()) as usize + 20;
        let polished = polish_root(&self.ann, &self.approx, prec, iters);
        if polished.inside(&self.approx) {
            return Ok(AlgebraicNumber { ann: self.ann.clone(), approx: polished, prec });
        }
        // Newton left the old disk: isolate again at the new precision
        for p in precision_ladder(prec) {
            let Some(roots) = isolate(&self.ann, p) else { continue };
            let Some(i) = pick(&roots, &self.approx, false) else { continue };
            return Ok(AlgebraicNumber { ann: self.ann.clone(), approx: roots[i].clone(), prec: p });
        }
        Err(AlgError::IdentificationFailure { ann: self.ann.to_compact_string("x"), prec })
    }

    /// Refines until the isolating disk has radius at most `target_err`.
    pub fn refine(&self, target_err: &Real) -> Result<Self, AlgError> {
        let mut x = self.clone();
        let mut p = self.prec;
        for _ in 0..24 {
            if x.approx.err() <= target_err {
                return Ok(x);
            }
            p *= 2;
            x = x.refine_prec(p)?;
        }
        Err(AlgError::IdentificationFailure { ann: self.ann.to_compact_string("x"), prec: p })
    }

    pub fn approx_at(&self, prec: u32) -> Result<ComplexApprox, AlgError> {
        Ok(self.refine_prec(prec)?.approx.with_prec(prec.max(self.prec)))
    }

    /// Whether `self` and `other` are the same root of the same annihilator.
    fn same_root(&self, other: &Self) -> bool {
        if self.ann != other.ann || !self.approx.overlaps(&other.approx) {
            return false;
        }
        let p = self.prec.max(other.prec);
        for p in precision_ladder(p) {
            let (Ok(a), Ok(b)) = (self.refine_prec(p), other.refine_prec(p)) else { return false };
            let Some(roots) = isolate(&self.ann, p) else { continue };
            return match (pick(&roots, &a.approx, false), pick(&roots, &b.approx, false)) {
                (Some(i), Some(j)) => i == j,
                _ => false,
            };
        }
        false
    }

    fn binary(&self, other: &Self, product: bool) -> Result<Self, AlgError> {
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            let q = if product { a * b } else { a + b };
            return Ok(Self::from_rational_prec(&q, self.prec.max(other.prec)));
        }
        let ann = if self.same_root(other) {
            kernel::combine_same(&self.ann, product)
        } else {
            kernel::combine(&self.ann, &other.ann, product)
        };
        let p0 = self.prec.max(other.prec).max(DEFAULT_PREC);
        Self::identify(
            &ann,
            &|p| {
                let a = self.approx_at(p)?;
                let b = other.approx_at(p)?;
                Ok(if product { a.mul(&b) } else { a.add(&b) })
            },
            p0,
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgError> {
        self.binary(other, false)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgError> {
        self.binary(other, true)
    }

    pub fn neg(&self) -> Self {
        if let Some(q) = self.as_rational() {
            return Self::from_rational_prec(&-q, self.prec);
        }
        AlgebraicNumber { ann: self.ann.negate_arg().primitive_part(), approx: self.approx.neg(), prec: self.prec }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgError> {
        self.add(&other.neg())
    }

    pub fn inv(&self) -> Result<Self, AlgError> {
        if self.is_zero()? {
            return Err(AlgError::ZeroDivision);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational_prec(&q.recip(), self.prec));
        }
        Self::identify(
            &self.ann.reciprocal(),
            &|p| self.approx_at(p)?.recip().map_err(|_| AlgError::ZeroDivision),
            self.prec.max(DEFAULT_PREC),
        )
    }

    pub fn div(&self, other: &Self) -> Result<Self, AlgError> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Result<Self, AlgError> {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Principal square root: non-negative real part, and `+i·sqrt(|a|)` for
    /// negative reals.
    pub fn sqrt(&self) -> Result<Self, AlgError> {
        if self.is_zero()? {
            return Ok(Self::from_rational_prec(&Rational::zero(), self.prec));
        }
        let negative_real = self.real_sign()? == Some(Ordering::Less);
        Self::identify(
            &self.ann.substitute_square(),
            &|p| {
                let z = self.approx_at(p)?;
                Ok(if negative_real { z.neg().sqrt().mul(&ComplexApprox::i(p)) } else { z.sqrt() })
            },
            self.prec.max(DEFAULT_PREC),
        )
    }

    /// Exact: the disk holds exactly one root, so the value is zero iff zero
    /// is a root and lies in the disk.
    pub fn is_zero(&self) -> Result<bool, AlgError> {
        if let Some(q) = self.as_rational() {
            return Ok(q.is_zero());
        }
        if !self.ann.coeff(0).is_zero() {
            return Ok(false);
        }
        let mut x = self.clone();
        for p in precision_ladder(self.prec) {
            x = x.refine_prec(p)?;
            if !x.approx.contains_zero() {
                return Ok(false);
            }
            // zero is a root and the only root in the disk
            if x.approx.center_distance_upper(&ComplexApprox::zero(p)) <= *x.approx.err() {
                return Ok(true);
            }
        }
        Ok(x.approx.contains_zero())
    }

    /// Decides whether the value is real by comparing its isolating disk with
    /// the mirrored one.
    pub fn is_real(&self) -> Result<bool, AlgError> {
        if self.as_rational().is_some() {
            return Ok(true);
        }
        for p in precision_ladder(self.prec.max(DEFAULT_PREC)) {
            let x = self.refine_prec(p)?;
            let z = &x.approx;
            if z.im().abs() > *z.err() {
                return Ok(false);
            }
            let Some(roots) = isolate(&self.ann, p) else { continue };
            let Some(i) = pick(&roots, z, false) else { continue };
            let r = &roots[i];
            let sym = ComplexApprox::exact(r.re().clone(), Real::zero(p)).with_err(&r.im().abs() + r.err());
            if roots.iter().enumerate().all(|(j, o)| j == i || !o.overlaps(&sym)) {
                return Ok(true);
            }
        }
        Err(AlgError::IdentificationFailure { ann: self.ann.to_compact_string("x"), prec: self.prec * PREC_GROWTH_CAP })
    }

    /// Sign of a real value; `None` when the value is not real.
    pub fn real_sign(&self) -> Result<Option<Ordering>, AlgError> {
        if let Some(q) = self.as_rational() {
            return Ok(Some(q.cmp(&Rational::zero())));
        }
        if !self.is_real()? {
            return Ok(None);
        }
        if self.is_zero()? {
            return Ok(Some(Ordering::Equal));
        }
        let mut p = self.prec;
        for _ in 0..24 {
            let z = self.approx_at(p)?;
            if z.re() > z.err() {
                return Ok(Some(Ordering::Greater));
            }
            if &-z.re() > z.err() {
                return Ok(Some(Ordering::Less));
            }
            p *= 2;
        }
        Err(AlgError::IdentificationFailure { ann: self.ann.to_compact_string("x"), prec: p })
    }

    /// Compares two real values exactly.
    pub fn cmp_real(&self, other: &Self) -> Result<Option<Ordering>, AlgError> {
        self.sub(other)?.real_sign()
    }

    pub fn to_payload(&self) -> Result<AlgPayload, AlgError> {
        let digits = Real::decimal_digits(self.prec) + 2;
        let re_s = self.approx.re().to_decimal_string(digits);
        let im_s = self.approx.im().to_decimal_string(digits);
        let c_re = parse_decimal(&re_s).map_err(|e| AlgError::Payload(e.to_string()))?;
        let c_im = parse_decimal(&im_s).map_err(|e| AlgError::Payload(e.to_string()))?;
        let err_exp = match newton_radius_sq(&self.ann, &c_re, &c_im) {
            Some(r2) if r2.is_zero() => -(self.prec as i64),
            Some(r2) => ceil_half_log2(&r2),
            None => self.approx.err().log2_upper().unwrap_or(-(self.prec as i64)) + 1,
        };
        Ok(AlgPayload {
            ann: self.ann.coeffs().iter().map(|c| c.numer().to_string()).collect(),
            approx_re: re_s,
            approx_im: im_s,
            err_exp,
        })
    }

    /// Rebuilds a value from its payload after checking it with
    /// [`verify_payload`].
    pub fn from_payload(p: &AlgPayload) -> Result<Self, AlgError> {
        if !verify_payload(p)? {
            return Err(AlgError::Payload("annihilator has no root within the declared error".into()));
        }
        let ann = payload_ann(p)?;
        let prec = ((-p.err_exp).max(MIN_PREC as i64) as u32).saturating_add(16);
        let re = parse_decimal(&p.approx_re).map_err(|e| AlgError::Payload(e.to_string()))?;
        let im = parse_decimal(&p.approx_im).map_err(|e| AlgError::Payload(e.to_string()))?;
        let err = Real::pow2_up(p.err_exp, prec);
        let z = ComplexApprox::from_rationals(&re, &im, prec).widen(&err);
        Self::from_root(&ann, &z)
    }
}

fn payload_ann(p: &AlgPayload) -> Result<UniPoly, AlgError> {
    let ints = p
        .ann
        .iter()
        .map(|s| parse_integer(s).map_err(|e| AlgError::Payload(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let f = UniPoly::from_integers(ints);
    if f.is_constant() {
        return Err(AlgError::Payload("annihilator must be nonconstant".into()));
    }
    Ok(f)
}

/// Exact Horner evaluation at `re + i im`.
pub fn eval_complex_rational(f: &UniPoly, re: &Rational, im: &Rational) -> (Rational, Rational) {
    let (mut a, mut b) = (Rational::zero(), Rational::zero());
    for c in f.coeffs().iter().rev() {
        let na = &a * re - &b * im + c;
        let nb = &a * im + &b * re;
        a = na;
        b = nb;
    }
    (a, b)
}

/// `(n |f(c)| / |f'(c)|)^2`, or `None` if `f'(c) = 0`.
fn newton_radius_sq(f: &UniPoly, re: &Rational, im: &Rational) -> Option<Rational> {
    let n = Rational::from_integer(f.degree()?.into());
    let (a, b) = eval_complex_rational(f, re, im);
    let (c, d) = eval_complex_rational(&f.derivative(), re, im);
    let den = &c * &c + &d * &d;
    if den.is_zero() {
        return None;
    }
    Some(&n * &n * (&a * &a + &b * &b) / den)
}

/// Smallest `e` with `r2 <= 4^e`, up to one unit of slack.
fn ceil_half_log2(r2: &Rational) -> i64 {
    let e2 = r2.numer().bits() as i64 - r2.denom().bits() as i64 + 1;
    (e2 + 1).div_euclid(2)
}

/// Exact check that some root of the payload's annihilator lies within
/// `2^err_exp` of its center: `n^2 |f(c)|^2 <= 4^err_exp |f'(c)|^2`.
pub fn verify_payload(p: &AlgPayload) -> Result<bool, AlgError> {
    let f = payload_ann(p)?;
    let re = parse_decimal(&p.approx_re).map_err(|e| AlgError::Payload(e.to_string()))?;
    let im = parse_decimal(&p.approx_im).map_err(|e| AlgError::Payload(e.to_string()))?;
    let Some(r2) = newton_radius_sq(&f, &re, &im) else { return Ok(false) };
    let two = BigInt::from(2);
    let bound = if p.err_exp >= 0 {
        Rational::from_integer(num_traits::pow(two, 2 * p.err_exp as usize))
    } else {
        Rational::new(BigInt::one(), num_traits::pow(two, (-2 * p.err_exp) as usize))
    };
    Ok(r2 <= bound)
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(30);
        write!(f, "{} ~ {}", self.ann.to_compact_string("x"), format_approx(&self.approx, digits))
    }
}

/// `a`, `a + b*i` or `a - b*i` with `digits` decimals, trailing zeros trimmed.
pub fn format_approx(z: &ComplexApprox, digits: usize) -> String {
    let trim = |s: String| {
        if s.contains('.') {
            let t = s.trim_end_matches('0').trim_end_matches('.').to_string();
            if t == "-0" {
                "0".to_string()
            } else {
                t
            }
        } else {
            s
        }
    };
    let re = trim(z.re().to_decimal_string(digits));
    let im_abs = trim(z.im().abs().to_decimal_string(digits));
    if im_abs == "0" {
        return re;
    }
    let sign = if z.im().is_negative() { '-' } else { '+' };
    format!("{re} {sign} {im_abs}*i")
}

/// Evaluates `+ - * / ^ sqrt()` over rational literals.
pub fn eval_expr(e: &Expr) -> Result<AlgebraicNumber, AlgError> {
    Ok(match e {
        Expr::Num(q) => AlgebraicNumber::from_rational(q),
        Expr::Var(v) => return Err(AlgError::Unsupported(format!("unknown name {v:?}"))),
        Expr::Neg(a) => eval_expr(a)?.neg(),
        Expr::Add(a, b) => eval_expr(a)?.add(&eval_expr(b)?)?,
        Expr::Sub(a, b) => eval_expr(a)?.sub(&eval_expr(b)?)?,
        Expr::Mul(a, b) => eval_expr(a)?.mul(&eval_expr(b)?)?,
        Expr::Div(a, b) => eval_expr(a)?.div(&eval_expr(b)?)?,
        Expr::Pow(a, k) => eval_expr(a)?.pow(*k)?,
        Expr::Call(name, args) if name == "sqrt" && args.len() == 1 => eval_expr(&args[0])?.sqrt()?,
        Expr::Call(name, args) => return Err(AlgError::Unsupported(format!("unknown function {name}/{}", args.len()))),
    })
}

pub fn eval_str(text: &str) -> Result<AlgebraicNumber, AlgError> {
    eval_expr(&parse_expr(text)?)
}

impl AlgebraicNumber {
    /// Center of the disk as `f64` parts, for diagnostics.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.approx.re().to_f64(), self.approx.im().to_f64())
    }

    /// `|ann(approx)|` as `f64`.
    pub fn residual_f64(&self) -> f64 {
        self.residual().to_f64()
    }

    /// Leading coefficient of the annihilator.
    pub fn leading_coeff(&self) -> BigInt {
        self.ann.leading().map(|c| c.numer().clone()).unwrap_or_default()
    }

    pub fn ann_degree_u32(&self) -> u32 {
        self.degree().to_u32().unwrap_or(u32::MAX)
    }
}

#[cfg(test)]
mod tests;
