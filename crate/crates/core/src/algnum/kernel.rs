//! Annihilators from linear dependence among powers.
//!
//! An element of `Q[a, b]` is stored by its coordinates in the basis
//! `a^r b^s` (`0 <= r < n`, `0 <= s < m`), with `a^n` and `b^m` rewritten
//! through their annihilators. Powers `c^0, c^1, ...` of the target element
//! are reduced one at a time by fraction-free elimination; the first power
//! that depends on the earlier ones yields the annihilating polynomial.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::Zero;

use crate::numeric::{denominator_lcm, Rational};
use crate::poly::UniPoly;

/// Multiplication by the generator with annihilator `f` in a tensor basis.
///
/// `stride` is the distance between consecutive powers of this generator in
/// the flattened coordinate vector and `n = deg f`.
pub(crate) struct Generator {
    reduction: Vec<Rational>,
    n: usize,
    stride: usize,
}

impl Generator {
    pub(crate) fn new(f: &UniPoly, stride: usize) -> Self {
        let n = f.degree().expect("annihilator is nonconstant");
        let lead = f.leading().expect("nonzero").clone();
        let reduction = (0..n).map(|k| -f.coeff(k) / &lead).collect();
        Generator { reduction, n, stride }
    }

    pub(crate) fn degree(&self) -> usize {
        self.n
    }

    /// `v * g` where `g` is this generator.
    pub(crate) fn times(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); v.len()];
        for (idx, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let r = (idx / self.stride) % self.n;
            let base = idx - r * self.stride;
            if r + 1 < self.n {
                out[base + (r + 1) * self.stride] += c;
            } else {
                for (k, red) in self.reduction.iter().enumerate() {
                    if !red.is_zero() {
                        out[base + k * self.stride] += c * red;
                    }
                }
            }
        }
        out
    }
}

/// Nonzero polynomial `p` of least degree with `p(c) = 0`, where
/// multiplication by `c` acts on `dim`-dimensional coordinate vectors and the
/// coordinates of `1` are the first unit vector.
pub(crate) fn power_dependence<F>(dim: usize, times_c: F) -> UniPoly
where
    F: Fn(&[Rational]) -> Vec<Rational>,
{
    struct Row {
        vec: Vec<BigInt>,
        combo: Vec<BigInt>,
        pivot: usize,
    }
    let mut rows: Vec<Row> = Vec::new();
    let mut v = vec![Rational::zero(); dim];
    v[0] = Rational::from_integer(1.into());
    for k in 0..=dim {
        let l = denominator_lcm(v.iter());
        let mut w: Vec<BigInt> = v.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        let mut combo = vec![BigInt::zero(); dim + 1];
        combo[k] = l;
        for row in &rows {
            let wp = w[row.pivot].clone();
            if wp.is_zero() {
                continue;
            }
            let rp = &row.vec[row.pivot];
            for (x, y) in w.iter_mut().zip(&row.vec) {
                *x = &*x * rp - &wp * y;
            }
            for (x, y) in combo.iter_mut().zip(&row.combo) {
                *x = &*x * rp - &wp * y;
            }
            let g = w.iter().chain(combo.iter()).fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if !g.is_zero() && g != BigInt::from(1) {
                for x in w.iter_mut().chain(combo.iter_mut()) {
                    *x = &*x / &g;
                }
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            None => return UniPoly::from_integers(combo.into_iter().take(k + 1)),
            Some(pivot) => rows.push(Row { vec: w, combo, pivot }),
        }
        if k < dim {
            v = times_c(&v);
        }
    }
    unreachable!("dim + 1 vectors in a dim-dimensional space are dependent")
}

/// Annihilator of `a + b` (or `a * b` with `product`) from annihilators of
/// `a` and `b` treated as independent generators.
pub(crate) fn combine(f: &UniPoly, g: &UniPoly, product: bool) -> UniPoly {
    let gb = Generator::new(g, 1);
    let ga = Generator::new(f, gb.degree());
    let dim = ga.degree() * gb.degree();
    power_dependence(dim, |v| {
        if product {
            ga.times(&gb.times(v))
        } else {
            let mut x = ga.times(v);
            for (xi, yi) in x.iter_mut().zip(gb.times(v)) {
                *xi += yi;
            }
            x
        }
    })
}

/// Annihilator of `a + a` (or `a * a`) in the single-generator basis.
pub(crate) fn combine_same(f: &UniPoly, product: bool) -> UniPoly {
    let ga = Generator::new(f, 1);
    power_dependence(ga.degree(), |v| {
        if product {
            ga.times(&ga.times(v))
        } else {
            ga.times(v).into_iter().map(|c| c * Rational::from_integer(2.into())).collect()
        }
    })
}
