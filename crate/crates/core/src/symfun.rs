//! Elementary symmetric polynomials, Vieta expansion and the lexicographic
//! decomposition of symmetric polynomials into elementary ones.
//!
//! [`eval_on_roots`] evaluates a symmetric polynomial on the full root
//! multiset of an integer polynomial without ever computing the roots: the
//! polynomial is decomposed and each `σk` is replaced by the Vieta ratio
//! `(-1)^k a_{n-k} / a_n`. [`power_sums`] computes the same kind of quantity
//! through Newton's identities and serves as an independent oracle.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::numeric::{binomial, ComplexApprox, Rational};
use crate::par::{self, Mode};
use crate::poly::{Monomial, MultiPoly, PolyError, UniPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("index out of range: need 1 <= k <= n, got n={n}, k={k}")]
    IndexOutOfRange { n: usize, k: usize },
    #[error("polynomial is not symmetric")]
    NotSymmetric,
    #[error("decomposition did not finish within {limit} iterations")]
    IterationLimit { limit: usize },
    #[error("degree of f ({deg}) does not match the variable count ({n_vars})")]
    DegreeMismatch { deg: usize, n_vars: usize },
    #[error("expected an integer, got {0}")]
    IntegralityViolation(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `σ_{n;k}`, the sum of all products of `k` distinct variables among `n`.
pub fn elementary_sym(n: usize, k: usize) -> Result<MultiPoly, SymError> {
    if k == 0 || k > n {
        return Err(SymError::IndexOutOfRange { n, k });
    }
    let mut terms = Vec::new();
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        let mut e = vec![0u32; n];
        for &i in &pick {
            e[i] = 1;
        }
        terms.push((Monomial::new(e), Rational::one()));
        // next k-subset in lexicographic order
        let mut i = k;
        while i > 0 && pick[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        pick[i - 1] += 1;
        for j in i..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
    Ok(MultiPoly::from_terms(n, terms))
}

/// Minimal ring interface for [`vieta_coeffs`].
pub trait VietaScalar: Clone {
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl VietaScalar for Rational {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl VietaScalar for MultiPoly {
    fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("Vieta operands share the variable count")
    }
    fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("Vieta operands share the variable count")
    }
    fn neg(&self) -> Self {
        MultiPoly::neg(self)
    }
}

impl VietaScalar for ComplexApprox {
    fn add(&self, other: &Self) -> Self {
        ComplexApprox::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        ComplexApprox::mul(self, other)
    }
    fn neg(&self) -> Self {
        ComplexApprox::neg(self)
    }
}

/// Coefficients of `leading * prod (x - r)`, constant term first.
///
/// The coefficient of `x^{n-k}` equals `leading * (-1)^k * σ_{n;k}(roots)`.
pub fn vieta_coeffs<T: VietaScalar>(roots: &[T], leading: &T) -> Vec<T> {
    let mut c = vec![leading.clone()];
    for r in roots {
        let mr = r.neg();
        let mut next = Vec::with_capacity(c.len() + 1);
        next.push(mr.mul(&c[0]));
        for j in 1..c.len() {
            next.push(c[j - 1].add(&mr.mul(&c[j])));
        }
        next.push(c[c.len() - 1].clone());
        c = next;
    }
    c
}

pub fn vieta_expand(roots: &[Rational], leading: &Rational) -> UniPoly {
    UniPoly::from_coeffs(vieta_coeffs(roots, leading))
}

/// Invariance under the adjacent transpositions, which generate `S_n`.
pub fn is_symmetric(p: &MultiPoly) -> bool {
    (0..p.n_vars().saturating_sub(1)).all(|i| &p.swap_vars(i, i + 1) == p)
}

/// `Σ c · σ1^{e1} ··· σn^{en}`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub n_vars: usize,
    pub terms: Vec<(Rational, Vec<u32>)>,
}

impl Decomposition {
    pub fn recompose(&self) -> MultiPoly {
        let mut cache = SigmaCache::new(self.n_vars);
        let mut acc = MultiPoly::zero(self.n_vars);
        for (c, e) in &self.terms {
            acc = acc.try_add(&cache.product(e).scale(c)).expect("same variable count");
        }
        acc
    }

    /// Substitutes values for `σ1..σn`.
    pub fn eval_sigma(&self, sigma: &[Rational]) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (c, e)| {
            let mut t = c.clone();
            for (s, &k) in sigma.iter().zip(e) {
                t *= num_traits::pow(s.clone(), k as usize);
            }
            acc + t
        })
    }
}

impl fmt::Display for Decomposition {
    /// `σ1^2 - 2·σ2`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, e)) in self.terms.iter().enumerate() {
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| if k == 1 { format!("σ{}", j + 1) } else { format!("σ{}^{k}", j + 1) })
                .collect();
            let a = c.abs();
            let body = match (factors.is_empty(), a.is_one()) {
                (true, _) => a.to_string(),
                (false, true) => factors.join("·"),
                (false, false) => format!("{a}·{}", factors.join("·")),
            };
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => f.write_str(&body)?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

/// Memoized powers of the elementary symmetric polynomials.
struct SigmaCache {
    n: usize,
    powers: HashMap<(usize, u32), MultiPoly>,
}

impl SigmaCache {
    fn new(n: usize) -> Self {
        SigmaCache { n, powers: HashMap::new() }
    }

    fn power(&mut self, k: usize, e: u32) -> MultiPoly {
        if e == 0 {
            return MultiPoly::one(self.n);
        }
        if let Some(p) = self.powers.get(&(k, e)) {
            return p.clone();
        }
        let base = elementary_sym(self.n, k).expect("1 <= k <= n");
        let p = if e == 1 { base } else { self.power(k, e - 1).try_mul(&base).expect("same variable count") };
        self.powers.insert((k, e), p.clone());
        p
    }

    fn product(&mut self, e: &[u32]) -> MultiPoly {
        let mut acc = MultiPoly::one(self.n);
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                acc = acc.try_mul(&self.power(i + 1, k)).expect("same variable count");
            }
        }
        acc
    }
}

/// Iteration cap: ten times the number of monomials of degree at most `deg`
/// in `n` variables.
pub fn iteration_cap(n: usize, deg: u32) -> usize {
    let count = binomial(deg as u64 + n as u64, n as u64);
    10 * usize::try_from(count).unwrap_or(usize::MAX / 10)
}

/// Rewrites a symmetric polynomial as a polynomial in `σ1..σn`.
pub fn decompose_elementary(p: &MultiPoly) -> Result<Decomposition, SymError> {
    decompose_traced(p).map(|(d, _)| d)
}

/// Like [`decompose_elementary`] and also returns the leading monomial seen
/// at every iteration, which is strictly decreasing in lex order.
pub fn decompose_traced(p: &MultiPoly) -> Result<(Decomposition, Vec<Monomial>), SymError> {
    if !is_symmetric(p) {
        return Err(SymError::NotSymmetric);
    }
    let n = p.n_vars();
    let limit = iteration_cap(n, p.total_degree().unwrap_or(0));
    let mut cache = SigmaCache::new(n);
    let mut rest = p.clone();
    let mut terms = Vec::new();
    let mut trace: Vec<Monomial> = Vec::new();
    while !rest.is_zero() {
        if trace.len() >= limit {
            return Err(SymError::IterationLimit { limit });
        }
        let (m, c) = rest.leading_term()?;
        let (m, c) = (m.clone(), c.clone());
        if let Some(prev) = trace.last() {
            assert!(m < *prev, "lex descent violated: {m:?} after {prev:?}");
        }
        let a = m.exponents();
        let mut e = Vec::with_capacity(n);
        for i in 0..n {
            let next = if i + 1 < n { a[i + 1] } else { 0 };
            // a symmetric leading monomial has non-increasing exponents
            if a[i] < next {
                return Err(SymError::NotSymmetric);
            }
            e.push(a[i] - next);
        }
        let sigma = cache.product(&e).scale(&c);
        rest = rest.try_sub(&sigma)?;
        terms.push((c, e));
        trace.push(m);
    }
    Ok((Decomposition { n_vars: n, terms }, trace))
}

/// Decomposes independent polynomials, optionally in parallel.
pub fn decompose_batch(ps: &[MultiPoly], mode: Mode) -> Vec<Result<Decomposition, SymError>> {
    par::map(mode, ps, decompose_elementary)
}

/// The Vieta ratios `σk(z) = (-1)^k a_{n-k} / a_n` for the roots of `f`.
pub fn vieta_sigmas(f: &UniPoly) -> Result<Vec<Rational>, SymError> {
    let n = f.degree().ok_or(PolyError::ZeroPolynomial)?;
    let lead = f.leading().expect("nonzero").clone();
    Ok((1..=n)
        .map(|k| {
            let v = f.coeff(n - k) / &lead;
            if k % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect())
}

/// `a_n^{deg p} · p(z_1, ..., z_n)` over the roots of `f`, computed exactly.
pub fn eval_on_roots(p: &MultiPoly, f: &UniPoly) -> Result<Rational, SymError> {
    let deg = f.degree().ok_or(PolyError::ZeroPolynomial)?;
    if deg != p.n_vars() {
        return Err(SymError::DegreeMismatch { deg, n_vars: p.n_vars() });
    }
    let d = decompose_elementary(p)?;
    let value = d.eval_sigma(&vieta_sigmas(f)?);
    let scale = num_traits::pow(f.leading().expect("nonzero").clone(), p.total_degree().unwrap_or(0) as usize);
    let out = value * scale;
    if !out.denom().is_one() {
        return Err(SymError::IntegralityViolation(out.to_string()));
    }
    Ok(out)
}

/// Power sums `p_t = Σ_j z_j^t` for `t = 0..=t_max` over the roots of `f`,
/// with multiplicity, via Newton's identities.
pub fn power_sums(f: &UniPoly, t_max: usize) -> Result<Vec<Rational>, SymError> {
    let n = f.degree().ok_or(PolyError::ZeroPolynomial)?;
    let e = vieta_sigmas(f)?;
    let sigma = |i: usize| if i >= 1 && i <= n { e[i - 1].clone() } else { Rational::zero() };
    let mut p = vec![Rational::from_integer(n.into())];
    for t in 1..=t_max {
        let mut s = Rational::zero();
        for i in 1..t.min(n + 1) {
            let term = sigma(i) * &p[t - i];
            if i % 2 == 1 {
                s += term;
            } else {
                s -= term;
            }
        }
        if t <= n {
            let term = sigma(t) * Rational::from_integer(t.into());
            if t % 2 == 1 {
                s += term;
            } else {
                s -= term;
            }
        }
        p.push(s);
    }
    Ok(p)
}

/// `Σ_i x_i^t` in `n` variables.
pub fn power_sum_poly(n: usize, t: u32) -> MultiPoly {
    MultiPoly::from_terms(
        n,
        (0..n).map(|i| {
            let mut e = vec![0; n];
            e[i] = t;
            (Monomial::new(e), Rational::one())
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn mp(s: &str, n: usize) -> MultiPoly {
        MultiPoly::parse(s, Some(n)).unwrap()
    }

    fn up(s: &str) -> UniPoly {
        UniPoly::parse(s).unwrap()
    }

    #[test]
    fn elementary_examples() {
        assert_eq!(elementary_sym(2, 1).unwrap(), mp("x1 + x2", 2));
        assert_eq!(elementary_sym(3, 3).unwrap(), mp("x1*x2*x3", 3));
        let s42 = elementary_sym(4, 2).unwrap();
        assert_eq!(s42.len(), 6);
        assert!(s42.terms().all(|(_, c)| c.is_one()));
        assert_eq!(elementary_sym(3, 0), Err(SymError::IndexOutOfRange { n: 3, k: 0 }));
        assert_eq!(elementary_sym(3, 4), Err(SymError::IndexOutOfRange { n: 3, k: 4 }));
    }

    #[test]
    fn vieta_examples() {
        assert_eq!(vieta_expand(&[q(1), q(2)], &q(1)), up("x^2 - 3*x + 2"));
        assert_eq!(vieta_expand(&[], &q(5)), up("5"));
        // (x - i)(x + i) with i as a symbol: roots x1 and -x1 modulo x1^2 = -1
        let i = MultiPoly::var(1, 0);
        let c = vieta_coeffs(&[i.clone(), i.neg()], &MultiPoly::one(1));
        assert_eq!(c[1], MultiPoly::zero(1));
        assert_eq!(c[0], mp("-x1^2", 1));
        // symbolic σ check: coefficient of x^{n-k} is (-1)^k σ_{n;k}
        let xs: Vec<MultiPoly> = (0..3).map(|i| MultiPoly::var(3, i)).collect();
        let c = vieta_coeffs(&xs, &MultiPoly::one(3));
        assert_eq!(c[1], elementary_sym(3, 2).unwrap());
        assert_eq!(c[0], elementary_sym(3, 3).unwrap().neg());
    }

    #[test]
    fn symmetry_examples() {
        assert!(is_symmetric(&mp("x1^2 + x2^2", 2)));
        assert!(!is_symmetric(&mp("x1^2*x2", 2)));
        let s = elementary_sym(3, 2).unwrap().pow(3).try_sub(&elementary_sym(3, 1).unwrap().scale(&q(5))).unwrap();
        assert!(is_symmetric(&s));
    }

    #[test]
    fn decomposition_examples() {
        let d = decompose_elementary(&mp("x1^2 + x2^2", 2)).unwrap();
        assert_eq!(d.to_string(), "σ1^2 - 2·σ2");
        assert_eq!(d.recompose(), mp("x1^2 + x2^2", 2));
        let d = decompose_elementary(&mp("x1^2*x2 + x1*x2^2", 2)).unwrap();
        assert_eq!(d.to_string(), "σ1·σ2");
        for n in 1..=4 {
            for k in 1..=n {
                let d = decompose_elementary(&elementary_sym(n, k).unwrap()).unwrap();
                let mut e = vec![0; n];
                e[k - 1] = 1;
                assert_eq!(d.terms, vec![(q(1), e)]);
            }
        }
        assert_eq!(decompose_elementary(&mp("x1", 2)), Err(SymError::NotSymmetric));
        assert_eq!(decompose_elementary(&MultiPoly::zero(2)).unwrap().to_string(), "0");
        assert_eq!(decompose_elementary(&mp("7", 2)).unwrap().to_string(), "7");
    }

    #[test]
    fn eval_on_roots_examples() {
        assert_eq!(eval_on_roots(&mp("x1^2 + x2^2", 2), &up("2*x^2 - 2")).unwrap(), q(8));
        assert_eq!(eval_on_roots(&elementary_sym(2, 1).unwrap(), &up("x^2 - 3*x + 2")).unwrap(), q(3));
        assert_eq!(eval_on_roots(&mp("x1*x2*x3", 3), &up("x^3 - 6")).unwrap(), q(6));
        assert_eq!(eval_on_roots(&mp("x1", 1), &up("x^2 - 1")), Err(SymError::DegreeMismatch { deg: 2, n_vars: 1 }));
    }

    #[test]
    fn eval_on_roots_matches_numeric_roots() {
        // roots ±1 of 2x^2 - 2, evaluated directly
        let p = mp("x1^2 + x2^2", 2);
        let v =
            p.eval_approx(&[ComplexApprox::from_f64(1.0, 0.0, 128), ComplexApprox::from_f64(-1.0, 0.0, 128)]).unwrap();
        assert!((v.to_c64().re * 4.0 - 8.0).abs() < 1e-30);
    }

    #[test]
    fn power_sum_examples() {
        let p = power_sums(&up("x^2 - 3*x + 2"), 2).unwrap();
        assert_eq!(p, vec![q(2), q(3), q(5)]);
        let p = power_sums(&up("x^2 + 1"), 4).unwrap();
        assert_eq!(p, vec![q(2), q(0), q(-2), q(0), q(2)]);
        let c = Rational::new(3.into(), 2.into());
        let p = power_sums(&UniPoly::from_coeffs(vec![-c.clone(), q(1)]), 5).unwrap();
        for (t, v) in p.iter().enumerate() {
            assert_eq!(*v, num_traits::pow(c.clone(), t));
        }
    }

    #[test]
    fn power_sums_agree_with_f64_roots() {
        // x^3 - 2x + 5: compare against roots found by plain Durand-Kerner in f64
        let f = up("x^3 - 2*x + 5");
        let roots = durand_kerner_f64(&[5.0, -2.0, 0.0, 1.0]);
        let p = power_sums(&f, 6).unwrap();
        for (t, pt) in p.iter().enumerate() {
            let s: num_complex::Complex64 = roots.iter().map(|z| z.powu(t as u32)).sum();
            assert!((s.re - pt.to_f64().unwrap()).abs() < 1e-8 * (1.0 + s.re.abs()));
            assert!(s.im.abs() < 1e-8 * (1.0 + s.re.abs()));
        }
    }

    fn durand_kerner_f64(c: &[f64]) -> Vec<num_complex::Complex64> {
        use num_complex::Complex64 as C;
        let n = c.len() - 1;
        let eval = |z: C| c.iter().rev().fold(C::new(0.0, 0.0), |a, &k| a * z + k);
        let mut zs: Vec<C> = (0..n).map(|i| C::new(0.4, 0.9).powu(i as u32)).collect();
        for _ in 0..500 {
            for i in 0..n {
                let mut den = C::new(c[n], 0.0);
                for j in 0..n {
                    if i != j {
                        den *= zs[i] - zs[j];
                    }
                }
                let step = eval(zs[i]) / den;
                zs[i] -= step;
            }
        }
        zs
    }

    #[test]
    fn power_sum_oracle_matches_decomposition() {
        for f in ["x^2 - 3*x + 2", "2*x^3 - x + 7", "3*x^4 + x^3 - 5"] {
            let f = up(f);
            let n = f.degree().unwrap();
            let ps = power_sums(&f, 5).unwrap();
            for t in 1..=5u32 {
                let via_sym = eval_on_roots(&power_sum_poly(n, t), &f).unwrap();
                let lead = num_traits::pow(f.leading().unwrap().clone(), t as usize);
                assert_eq!(via_sym, lead * &ps[t as usize]);
            }
        }
    }

    #[test]
    fn batch_modes_agree() {
        let ps: Vec<MultiPoly> = (1..=4u32).map(|t| power_sum_poly(3, t)).collect();
        let a = decompose_batch(&ps, Mode::Sequential);
        let b = decompose_batch(&ps, Mode::Parallel);
        assert_eq!(a, b);
    }

    #[test]
    fn cap_counts_monomials() {
        // C(2 + 2, 2) = 6 monomials of degree <= 2 in two variables
        assert_eq!(iteration_cap(2, 2), 60);
    }
}
