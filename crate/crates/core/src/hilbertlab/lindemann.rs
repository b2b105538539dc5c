//! Reduction from `Π_i (1 + e^(x_i)) = 0` over the roots `x_i` of `Q` to a
//! Hilbert instance.
//!
//! Expanding the product gives `1 + Σ_S e^(Σ_{i∈S} x_i)` over the `2^m - 1`
//! nonempty subsets `S`. The subset sums are the roots of
//! `P̂ = α^(2^m - 1) Π_S (X - Σ_{i∈S} x_i)`, whose coefficients are symmetric
//! in the `x_i` and therefore computable from the coefficients of `Q`.

use num_bigint::BigInt;
use num_traits::One;

use super::{normalize_instance, HilbertError, HilbertInstance};
use crate::par::Mode;
use crate::poly::{MultiPoly, UniPoly};
use crate::symfun::{decompose_batch, vieta_sigmas};

/// Subset expansion grows as `2^m`; larger degrees are refused.
pub const MAX_LINDEMANN_DEGREE: usize = 4;

#[derive(Clone, Debug)]
pub struct Lindemann {
    /// The product over all nonempty subset sums, before stripping zeros.
    pub p_hat: UniPoly,
    pub instance: HilbertInstance,
}

/// `Π_S (X - Σ_{i∈S} x_i)` with coefficients in `Q[x_1..x_m]`, constant term
/// first.
fn subset_product(m: usize) -> Result<Vec<MultiPoly>, HilbertError> {
    let mut coeffs = vec![MultiPoly::one(m)];
    for mask in 1usize..(1 << m) {
        let mut s = MultiPoly::zero(m);
        for i in (0..m).filter(|i| mask >> i & 1 == 1) {
            s = s.try_add(&MultiPoly::var(m, i))?;
        }
        let mut next = vec![MultiPoly::zero(m); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].try_add(c)?;
            next[i] = next[i].try_sub(&c.try_mul(&s)?)?;
        }
        coeffs = next;
    }
    Ok(coeffs)
}

pub fn lindemann_reduce(q: &UniPoly, prec: u32, mode: Mode) -> Result<Lindemann, HilbertError> {
    let m = q.degree().ok_or_else(|| HilbertError::InvalidInput("Q must be nonzero".into()))?;
    if m == 0 {
        return Err(HilbertError::InvalidInput("Q must have degree at least 1".into()));
    }
    if m > MAX_LINDEMANN_DEGREE {
        return Err(HilbertError::DegreeCapExceeded { m, cap: MAX_LINDEMANN_DEGREE });
    }
    super::integer_poly(q, "Q")?;
    let n = (1usize << m) - 1;
    let alpha = q.leading().expect("nonzero").clone();
    let scale = num_traits::pow(alpha, n);
    let coeffs = subset_product(m)?;
    let sigma = vieta_sigmas(q)?;
    let mut out = Vec::with_capacity(coeffs.len());
    for (i, d) in decompose_batch(&coeffs, mode).into_iter().enumerate() {
        let value = d?.eval_sigma(&sigma) * &scale;
        if !value.is_integer() {
            return Err(HilbertError::IntegralityViolation(format!("coefficient of X^{i} is {value}")));
        }
        out.push(value);
    }
    let p_hat = UniPoly::from_coeffs(out);
    let instance = normalize_instance(&p_hat, &BigInt::one(), prec)?;
    Ok(Lindemann { p_hat, instance })
}
