use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::uni::format_terms;
use super::PolyError;
use crate::expr::{parse_expr, Expr};
use crate::numeric::{ComplexApprox, Rational};

/// Exponent vector. The derived ordering is lexicographic with the exponent
/// of `x1` compared first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n_vars: usize) -> Self {
        Monomial(vec![0; n_vars])
    }

    pub fn var(n_vars: usize, i: usize) -> Self {
        let mut e = vec![0; n_vars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn n_vars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn text(&self) -> String {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Sparse polynomial in `x1..xn` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    n_vars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(n_vars: usize) -> Self {
        MultiPoly { n_vars, terms: BTreeMap::new() }
    }

    pub fn constant(n_vars: usize, c: Rational) -> Self {
        Self::from_terms(n_vars, [(Monomial::one(n_vars), c)])
    }

    pub fn one(n_vars: usize) -> Self {
        Self::constant(n_vars, Rational::one())
    }

    /// The variable `x_{i+1}`.
    pub fn var(n_vars: usize, i: usize) -> Self {
        Self::from_terms(n_vars, [(Monomial::var(n_vars, i), Rational::one())])
    }

    /// Sums the given terms, dropping zeros. Panics if a monomial has the
    /// wrong length.
    pub fn from_terms(n_vars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(n_vars);
        for (m, c) in terms {
            assert_eq!(m.n_vars(), n_vars, "monomial length must match variable count");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Lexicographically largest monomial with its coefficient.
    pub fn leading_term(&self) -> Result<(&Monomial, &Rational), PolyError> {
        self.terms.iter().next_back().ok_or(PolyError::ZeroPolynomial)
    }

    pub fn leading_monomial(&self) -> Result<Monomial, PolyError> {
        self.leading_term().map(|(m, _)| m.clone())
    }

    fn check(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if self.n_vars != other.n_vars {
            return Err(PolyError::VarCountMismatch { left: self.n_vars, right: other.n_vars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check(other)?;
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(MultiPoly { n_vars: self.n_vars, terms: acc })
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.n_vars);
        }
        MultiPoly { n_vars: self.n_vars, terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> MultiPoly {
        assert_eq!(m.n_vars(), self.n_vars);
        if c.is_zero() {
            return Self::zero(self.n_vars);
        }
        MultiPoly { n_vars: self.n_vars, terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = Self::one(self.n_vars);
        for _ in 0..e {
            acc = acc.try_mul(self).expect("same variable count");
        }
        acc
    }

    /// Exchanges `x_{i+1}` and `x_{j+1}`.
    pub fn swap_vars(&self, i: usize, j: usize) -> MultiPoly {
        MultiPoly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.swap(i, j);
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    pub fn eval(&self, xs: &[Rational]) -> Result<Rational, PolyError> {
        if xs.len() != self.n_vars {
            return Err(PolyError::VarCountMismatch { left: self.n_vars, right: xs.len() });
        }
        Ok(self.terms.iter().fold(Rational::zero(), |acc, (m, c)| {
            let mut t = c.clone();
            for (x, &e) in xs.iter().zip(&m.0) {
                t *= num_traits::pow(x.clone(), e as usize);
            }
            acc + t
        }))
    }

    pub fn eval_approx(&self, xs: &[ComplexApprox]) -> Result<ComplexApprox, PolyError> {
        if xs.len() != self.n_vars {
            return Err(PolyError::VarCountMismatch { left: self.n_vars, right: xs.len() });
        }
        let prec = xs.iter().map(ComplexApprox::prec).max().unwrap_or(crate::numeric::MIN_PREC);
        let mut acc = ComplexApprox::zero(prec);
        for (m, c) in &self.terms {
            let mut t = ComplexApprox::from_rational(c, prec);
            for (x, &e) in xs.iter().zip(&m.0) {
                if e > 0 {
                    t = t.mul(&x.pow(e));
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Builds a polynomial from an expression tree. `resolve` maps a variable
    /// name to its index. Division is allowed only by constants.
    pub fn from_expr(
        expr: &Expr,
        n_vars: usize,
        resolve: &mut dyn FnMut(&str) -> Result<usize, String>,
    ) -> Result<MultiPoly, PolyError> {
        let go = |e: &Expr, r: &mut dyn FnMut(&str) -> Result<usize, String>| Self::from_expr(e, n_vars, r);
        Ok(match expr {
            Expr::Num(q) => Self::constant(n_vars, q.clone()),
            Expr::Var(name) => {
                let i = resolve(name).map_err(PolyError::Unsupported)?;
                if i >= n_vars {
                    return Err(PolyError::Unsupported(format!("variable {name} out of range")));
                }
                Self::var(n_vars, i)
            }
            Expr::Neg(a) => go(a, resolve)?.neg(),
            Expr::Add(a, b) => go(a, resolve)?.try_add(&go(b, resolve)?)?,
            Expr::Sub(a, b) => go(a, resolve)?.try_sub(&go(b, resolve)?)?,
            Expr::Mul(a, b) => go(a, resolve)?.try_mul(&go(b, resolve)?)?,
            Expr::Div(a, b) => {
                let num = go(a, resolve)?;
                let den = go(b, resolve)?;
                let c = match den.terms.iter().next() {
                    Some((m, c)) if den.len() == 1 && m.degree() == 0 => c.clone(),
                    _ => return Err(PolyError::Unsupported("division by a non-constant polynomial".into())),
                };
                num.scale(&c.recip())
            }
            Expr::Pow(a, e) => go(a, resolve)?.pow(*e),
            Expr::Call(name, _) => return Err(PolyError::Unsupported(format!("function call {name}() in polynomial"))),
        })
    }

    /// Parses text in the variables `x1, x2, ...`. With `n_vars = None` the
    /// count is the largest index that appears (at least 1).
    pub fn parse(text: &str, n_vars: Option<usize>) -> Result<MultiPoly, PolyError> {
        let expr = parse_expr(text)?;
        let mut max_idx = 0usize;
        collect_indices(&expr, &mut max_idx)?;
        let n = match n_vars {
            Some(n) if n < max_idx => return Err(PolyError::VarCountMismatch { left: n, right: max_idx }),
            Some(n) => n,
            None => max_idx.max(1),
        };
        Self::from_expr(&expr, n, &mut |v| var_index(v).map(|i| i - 1))
    }
}

fn var_index(name: &str) -> Result<usize, String> {
    name.strip_prefix('x')
        .and_then(|d| d.parse::<usize>().ok())
        .filter(|&i| i >= 1)
        .ok_or_else(|| format!("unknown variable {name:?}; expected x1, x2, ..."))
}

fn collect_indices(e: &Expr, max: &mut usize) -> Result<(), PolyError> {
    match e {
        Expr::Num(_) => {}
        Expr::Var(v) => *max = (*max).max(var_index(v).map_err(PolyError::Unsupported)?),
        Expr::Neg(a) | Expr::Pow(a, _) => collect_indices(a, max)?,
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            collect_indices(a, max)?;
            collect_indices(b, max)?;
        }
        Expr::Call(_, args) => {
            for a in args {
                collect_indices(a, max)?;
            }
        }
    }
    Ok(())
}

impl fmt::Display for MultiPoly {
    /// Terms in decreasing lex order: `x1^2*x2 + 4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_terms(self.terms.iter().rev().map(|(m, c)| (c.clone(), m.text())), " "))
    }
}

impl From<&MultiPoly> for BTreeMap<Vec<u32>, Rational> {
    fn from(p: &MultiPoly) -> Self {
        p.terms.iter().map(|(m, c)| (m.0.clone(), c.clone())).collect()
    }
}
