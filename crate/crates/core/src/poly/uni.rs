use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{MultiPoly, PolyError};
use crate::numeric::{binomial, denominator_lcm, integer_content, ComplexApprox, Rational};

/// Dense univariate polynomial, constant coefficient first.
///
/// The coefficient vector is trimmed: the last entry is nonzero unless the
/// polynomial is zero, in which case the vector is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_integers(coeffs: impl IntoIterator<Item = BigInt>) -> Self {
        Self::from_coeffs(coeffs.into_iter().map(Rational::from_integer).collect())
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// `leading * (x - r_1) ... (x - r_n)`
    pub fn from_roots(roots: &[Rational], leading: Rational) -> Self {
        roots
            .iter()
            .fold(Self::constant(leading), |acc, r| &acc * &Self::from_coeffs(vec![-r.clone(), Rational::one()]))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(g(x))`
    pub fn compose(&self, g: &UniPoly) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Self::constant(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * rat(i as i64)).collect())
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation with outward error propagation.
    pub fn eval_approx(&self, z: &ComplexApprox) -> ComplexApprox {
        let prec = z.prec();
        self.coeffs
            .iter()
            .rev()
            .fold(ComplexApprox::zero(prec), |acc, c| acc.mul(z).add(&ComplexApprox::from_rational(c, prec)))
    }

    /// Horner evaluation on f64 values.
    pub fn eval_c64(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(num_complex::Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Euclidean division over the rationals; `None` for a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> Option<(UniPoly, UniPoly)> {
        let dd = d.degree()?;
        let lead = d.leading()?.clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Some((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    pub fn rem(&self, d: &UniPoly) -> Option<UniPoly> {
        self.div_rem(d).map(|(_, r)| r)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }

    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.denom().is_one().then(|| c.numer().clone())).collect()
    }

    /// Integer polynomial with content 1 and positive leading coefficient
    /// that is a rational multiple of `self`. Zero stays zero.
    pub fn primitive_part(&self) -> UniPoly {
        if self.is_zero() {
            return Self::zero();
        }
        let l = denominator_lcm(self.coeffs.iter());
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        let mut g = integer_content(ints.iter());
        if ints.last().is_some_and(|x| x.is_negative()) {
            g = -g;
        }
        Self::from_integers(ints.into_iter().map(|x| x / &g))
    }

    /// Gcd normalized to a primitive integer polynomial; computed by Euclid on
    /// primitive parts so intermediate coefficients stay small.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if b.is_zero() {
            return a;
        }
        loop {
            let r = a.rem(&b).expect("divisor is nonzero");
            if r.is_zero() {
                return b;
            }
            a = b;
            b = r.primitive_part();
        }
    }

    /// `f / gcd(f, f')`, made primitive with positive leading coefficient.
    pub fn squarefree_primitive(&self) -> Result<UniPoly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if self.is_constant() {
            return Ok(Self::one());
        }
        let g = self.gcd(&self.derivative());
        let (q, _) = self.div_rem(&g).expect("gcd of a nonzero polynomial is nonzero");
        Ok(q.primitive_part())
    }

    /// The `H_l` with `f(X + Y) = sum_l H_l(Y) X^l`.
    pub fn shift_expand(&self) -> Vec<UniPoly> {
        let d = match self.degree() {
            Some(d) => d,
            None => return Vec::new(),
        };
        (0..=d)
            .map(|l| {
                Self::from_coeffs(
                    (l..=d).map(|i| &self.coeffs[i] * Rational::from_integer(binomial(i as u64, l as u64))).collect(),
                )
            })
            .collect()
    }

    /// `f(-x)`
    pub fn negate_arg(&self) -> UniPoly {
        Self::from_coeffs(
            self.coeffs.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect(),
        )
    }

    /// `x^n f(1/x)` with `n = deg f`.
    pub fn reciprocal(&self) -> UniPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::from_coeffs(c)
    }

    /// `f(x^2)`
    pub fn substitute_square(&self) -> UniPoly {
        let mut c = vec![Rational::zero(); self.coeffs.len() * 2];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[2 * i] = a.clone();
        }
        Self::from_coeffs(c)
    }

    /// `f(x - q)`
    pub fn shift_arg(&self, q: &Rational) -> UniPoly {
        self.compose(&Self::from_coeffs(vec![-q.clone(), Rational::one()]))
    }

    /// `f(q x)`
    pub fn scale_arg(&self, q: &Rational) -> UniPoly {
        let mut p = Rational::one();
        let mut c = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            c.push(a * &p);
            p *= q;
        }
        Self::from_coeffs(c)
    }

    /// Multiplicity of the root at zero.
    pub fn zero_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Drops the first `v` coefficients, i.e. divides by `x^v`.
    pub fn divide_by_x_pow(&self, v: usize) -> UniPoly {
        Self::from_coeffs(self.coeffs.iter().skip(v).cloned().collect())
    }

    pub fn to_multi(&self) -> MultiPoly {
        MultiPoly::from_terms(
            1,
            self.coeffs.iter().enumerate().map(|(i, c)| (super::Monomial::new(vec![i as u32]), c.clone())),
        )
    }

    pub fn to_string_with(&self, var: &str) -> String {
        format_terms(
            self.coeffs.iter().enumerate().rev().filter(|(_, c)| !c.is_zero()).map(|(i, c)| {
                let m = match i {
                    0 => String::new(),
                    1 => var.to_string(),
                    _ => format!("{var}^{i}"),
                };
                (c.clone(), m)
            }),
            " ",
        )
    }

    /// Same as `to_string_with` but without spaces: `x^4-10*x^2+1`.
    pub fn to_compact_string(&self, var: &str) -> String {
        self.to_string_with(var).replace(' ', "")
    }

    /// Parses `"2*x^2 - 3*x + 1"`; any single variable name is accepted.
    pub fn parse(text: &str) -> Result<UniPoly, PolyError> {
        let expr = crate::expr::parse_expr(text)?;
        let mut name: Option<String> = None;
        let m = MultiPoly::from_expr(&expr, 1, &mut |v: &str| match &name {
            Some(n) if n != v => Err(format!("second variable {v:?} in univariate polynomial")),
            _ => {
                name = Some(v.to_string());
                Ok(0)
            }
        })?;
        Ok(Self::from_multi(&m))
    }

    /// Reads a one-variable `MultiPoly` as a univariate polynomial.
    pub fn from_multi(m: &MultiPoly) -> UniPoly {
        let deg = m.terms().map(|(mono, _)| mono.exponents()[0] as usize).max();
        let mut c = vec![Rational::zero(); deg.map_or(0, |d| d + 1)];
        for (mono, coef) in m.terms() {
            c[mono.exponents()[0] as usize] = coef.clone();
        }
        Self::from_coeffs(c)
    }
}

/// Joins `(coefficient, monomial text)` pairs as `c*m + c*m - ...`.
pub(crate) fn format_terms(terms: impl Iterator<Item = (Rational, String)>, sep: &str) -> String {
    let mut out = String::new();
    for (i, (c, m)) in terms.enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        let body = if m.is_empty() {
            a.to_string()
        } else if a.is_one() {
            m
        } else {
            format!("{a}*{m}")
        };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(sep);
            out.push(if neg { '-' } else { '+' });
            out.push_str(sep);
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with("x"))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(c)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl std::str::FromStr for UniPoly {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        UniPoly::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> UniPoly {
        UniPoly::parse(s).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&p("x - 1") * &p("x - 2"), p("x^2 - 3*x + 2"));
        assert_eq!(p("x^2 - 2").compose(&p("x^2")), p("x^4 - 2"));
        let f = p("3*x^5 - x + 7");
        assert!((&f + &(-&f)).is_zero());
        assert_eq!((&p("x+1") * &p("x^2+1")).degree(), Some(3));
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(p("x^2 - 3*x + 2").eval(&rat(2)), rat(0));
        assert_eq!(p("x^2 + 1").eval(&rat(0)), rat(1));
        // numeric root of the sqrt(2)+sqrt(3) annihilator
        let z = ComplexApprox::from_f64(2f64.sqrt() + 3f64.sqrt(), 0.0, 128);
        let v = p("x^4 - 10*x^2 + 1").eval_approx(&z);
        assert!(v.to_c64().norm() < 1e-12);
    }

    #[test]
    fn squarefree_primitive_examples() {
        assert_eq!(p("(x^2 - 6)^2").squarefree_primitive().unwrap(), p("x^2 - 6"));
        assert_eq!(p("2*x - 4").squarefree_primitive().unwrap(), p("x - 2"));
        assert_eq!(p("x^2 - 2").squarefree_primitive().unwrap(), p("x^2 - 2"));
        assert_eq!(p("-3/2*x^3 + 3/2*x").squarefree_primitive().unwrap(), p("x^3 - x"));
        assert_eq!(UniPoly::zero().squarefree_primitive(), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn shift_expand_examples() {
        let h = p("x^2").shift_expand();
        assert_eq!(h, vec![p("x^2"), p("2*x"), p("1")]);
        // oracle: expand (x+y)((x+y)-1)^2 by hand
        let h = p("x*(x-1)^2").shift_expand();
        assert_eq!(h[0], p("x*(x-1)^2"));
        assert_eq!(h[1], p("3*x^2 - 4*x + 1"));
        assert_eq!(h[2], p("3*x - 2"));
        assert_eq!(h[3], p("1"));
    }

    #[test]
    fn argument_transforms() {
        let f = p("x^2 - 2");
        assert_eq!(f.negate_arg(), p("x^2 - 2"));
        assert_eq!(f.reciprocal(), p("1 - 2*x^2"));
        assert_eq!(f.substitute_square(), p("x^4 - 2"));
        assert_eq!(p("x^3 + x").zero_order(), 1);
        assert_eq!(p("x^3 + x").divide_by_x_pow(1), p("x^2 + 1"));
    }

    #[test]
    fn gcd_and_division() {
        let a = &p("x^2 - 1") * &p("x + 3");
        let b = &p("x^2 - 1") * &p("2*x - 5");
        assert_eq!(a.gcd(&b), p("x^2 - 1"));
        let (q, r) = p("x^3 + 2").div_rem(&p("x - 1")).unwrap();
        assert_eq!(&(&q * &p("x - 1")) + &r, p("x^3 + 2"));
        assert!(p("x").div_rem(&UniPoly::zero()).is_none());
    }

    #[test]
    fn printing() {
        assert_eq!(p("2*x^2 - 3*x + 1").to_string(), "2*x^2 - 3*x + 1");
        assert_eq!(p("-x^3 + 1/2").to_string(), "-x^3 + 1/2");
        assert_eq!(UniPoly::zero().to_string(), "0");
        assert_eq!(p("x^4-10*x^2+1").to_compact_string("x"), "x^4-10*x^2+1");
        assert_eq!(p("X^2 + 1").to_string_with("X"), "X^2 + 1");
        assert!(UniPoly::parse("x + y").is_err());
    }

    fn arb_poly() -> impl Strategy<Value = UniPoly> {
        prop::collection::vec((-20i64..20, 1i64..5), 0..7).prop_map(|cs| {
            UniPoly::from_coeffs(cs.into_iter().map(|(n, d)| Rational::new(n.into(), d.into())).collect())
        })
    }

    proptest! {
        #[test]
        fn text_round_trip(f in arb_poly()) {
            prop_assert_eq!(UniPoly::parse(&f.to_string()).unwrap(), f);
        }

        #[test]
        fn shift_expand_reconstructs(f in arb_poly(), xs in prop::collection::vec((-9i64..9, 1i64..4, -9i64..9, 1i64..4), 20)) {
            let h = f.shift_expand();
            for (xn, xd, yn, yd) in xs {
                let x = Rational::new(xn.into(), xd.into());
                let y = Rational::new(yn.into(), yd.into());
                let mut sum = Rational::zero();
                let mut xp = Rational::one();
                for hl in &h {
                    sum += hl.eval(&y) * &xp;
                    xp *= &x;
                }
                prop_assert_eq!(sum, f.eval(&(&x + &y)));
            }
        }
    }
}
