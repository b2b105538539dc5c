//! Gauss-Legendre quadrature at arbitrary precision.
//!
//! Nodes are the roots of the Legendre polynomial `P_n`, found by Newton
//! iteration from the usual cosine guesses. Node sets are cached per
//! `(n, prec)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;

use crate::numeric::{ComplexApprox, Real, MIN_PREC};

const GUARD_BITS: u32 = 32;

/// `(node, weight)` pairs on `[-1, 1]`, nodes increasing.
pub type Rule = Arc<Vec<(Real, Real)>>;

type Cache = Mutex<HashMap<(usize, u32), Rule>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn gauss_legendre(n: usize, prec: u32) -> Rule {
    assert!(n >= 1, "quadrature needs at least one node");
    let prec = prec.max(MIN_PREC);
    if let Some(r) = cache().lock().expect("cache lock").get(&(n, prec)) {
        return r.clone();
    }
    let rule = Arc::new(compute_rule(n, prec));
    cache().lock().expect("cache lock").insert((n, prec), rule.clone());
    rule
}

/// `(P_n(x), P_{n-1}(x))` by the three-term recurrence.
fn legendre_pair(n: usize, x: &Real) -> (Real, Real) {
    let wp = x.prec();
    let mut prev = Real::one(wp);
    let mut cur = x.clone();
    for k in 1..n {
        let k_big = BigInt::from(k);
        let a = x.mul(&cur).mul_int(&BigInt::from(2 * k + 1));
        let b = prev.mul_int(&k_big);
        let next = (&a - &b).div_int(&BigInt::from(k + 1));
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

fn compute_rule(n: usize, prec: u32) -> Vec<(Real, Real)> {
    let wp = prec + GUARD_BITS;
    let nb = BigInt::from(n);
    let tol = Real::pow2_up(-(wp as i64) + 8, wp);
    let mut half = Vec::with_capacity(n.div_ceil(2));
    for i in 1..=n.div_ceil(2) {
        let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut x = Real::from_f64(guess, wp);
        let mut dp = Real::one(wp);
        for _ in 0..64 {
            let (p, q) = legendre_pair(n, &x);
            let x2m1 = &x.mul(&x) - &Real::one(wp);
            dp = (&x.mul(&p) - &q).mul_int(&nb).div(&x2m1).unwrap_or_else(|| Real::one(wp));
            let step = p.div(&dp).unwrap_or_else(|| Real::zero(wp));
            x = &x - &step;
            if step.abs() <= tol {
                break;
            }
        }
        // recompute the derivative at the final node
        let (p, q) = legendre_pair(n, &x);
        let x2m1 = &x.mul(&x) - &Real::one(wp);
        if let Some(d) = (&x.mul(&p) - &q).mul_int(&nb).div(&x2m1) {
            dp = d;
        }
        let one_m_x2 = -&x2m1;
        let w =
            Real::from_i64(2, wp).div(&one_m_x2.mul(&dp).mul(&dp)).expect("Legendre nodes lie strictly inside (-1, 1)");
        half.push((x, w));
    }
    let mut out: Vec<(Real, Real)> = Vec::with_capacity(n);
    for (x, w) in half.iter() {
        out.push((-x.with_prec(prec), w.with_prec(prec)));
    }
    // the middle node of an odd rule is 0 and appears once
    let skip = n % 2;
    for (x, w) in half.iter().rev().skip(skip) {
        out.push((x.with_prec(prec), w.with_prec(prec)));
    }
    if skip == 1 {
        out[n / 2].0 = Real::zero(prec);
    }
    out
}

/// `∫_0^s g(x) dx` along the straight segment from 0 to `s`.
///
/// The returned error covers rounding only; truncation error is estimated
/// by callers from two node counts.
pub fn integrate_segment<G>(g: G, s: &ComplexApprox, nodes: usize, prec: u32) -> ComplexApprox
where
    G: Fn(&ComplexApprox) -> ComplexApprox,
{
    let rule = gauss_legendre(nodes, prec);
    let half_s = s.mul_real(&Real::one(prec).mul_pow2(-1));
    let mut acc = ComplexApprox::zero(prec);
    for (x, w) in rule.iter() {
        let t = &Real::one(prec) + x;
        let point = half_s.mul_real(&t);
        acc = acc.add(&g(&point).mul_real(w));
    }
    acc.mul(&half_s)
}
