//! Growth bound `|S_k| <= U V^k` and the point `k0` from which
//! `U V^k / k!` stays below 1.
//!
//! On each segment `[0, s_j]` we have `F_k e^-x = λ_k (x P)^k P e^-x`, so
//! with `M = max |x P(x)|` and `m = max |P(x) e^-x|` over all segments,
//! `|S_k| <= |λ_k| M^k m Σ_j |e^(s_j)| |s_j|`, and `|λ_k| <= |α|^(3nk)` for
//! `k >= 1`. The maxima are found numerically in `f64`: a uniform sample
//! followed by golden-section refinement, inflated by a relative `1e-9`.

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::HilbertInstance;

const SAMPLES: usize = 256;
const INFLATE: f64 = 1.0 + 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct DecayBound {
    pub u: f64,
    pub v: f64,
    /// `max |x P(x)|` over the segments.
    pub m_xp: f64,
    /// `max |P(x) e^-x|` over the segments.
    pub m_pexp: f64,
    pub k0: usize,
}

impl DecayBound {
    /// `U V^k`.
    pub fn bound(&self, k: usize) -> f64 {
        self.u * self.v.powi(k as i32)
    }

    /// `U V^k / k!`, evaluated in log space.
    pub fn ratio_term(&self, k: usize) -> f64 {
        ln_term(self.u, self.v, k).exp()
    }
}

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

fn ln_term(u: f64, v: f64, k: usize) -> f64 {
    if u == 0.0 || (v == 0.0 && k > 0) {
        return f64::NEG_INFINITY;
    }
    u.ln() + k as f64 * v.ln() - ln_factorial(k)
}

/// Maximum of `g` on `[0, 1]`.
fn maximize(g: impl Fn(f64) -> f64) -> f64 {
    let ts: Vec<f64> = (0..=SAMPLES).map(|i| i as f64 / SAMPLES as f64).collect();
    let vals: Vec<f64> = ts.iter().map(|&t| g(t)).collect();
    let (best, &top) = vals.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("samples");
    let (mut lo, mut hi) = (ts[best.saturating_sub(1)], ts[(best + 1).min(SAMPLES)]);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let x1 = hi - phi * (hi - lo);
        let x2 = lo + phi * (hi - lo);
        if g(x1) < g(x2) {
            lo = x1;
        } else {
            hi = x2;
        }
    }
    top.max(g((lo + hi) / 2.0)) * INFLATE
}

pub fn decay_bound(inst: &HilbertInstance) -> DecayBound {
    let roots: Vec<Complex64> = inst.roots.iter().map(|z| z.to_c64()).collect();
    let p = &inst.p;
    let mut m_xp = 0.0f64;
    let mut m_pexp = 0.0f64;
    let mut weight = 0.0f64;
    for &s in &roots {
        m_xp = m_xp.max(maximize(|t| {
            let x = s * t;
            (x * p.eval_c64(x)).norm()
        }));
        m_pexp = m_pexp.max(maximize(|t| {
            let x = s * t;
            (p.eval_c64(x) * (-x).exp()).norm()
        }));
        weight += s.exp().norm() * s.norm();
    }
    let n = inst.degree() as i32;
    let alpha = inst.alpha().to_f64().unwrap_or(f64::INFINITY).abs();
    let u = m_pexp * weight * INFLATE;
    let v = alpha.powi(3 * n) * m_xp;
    DecayBound { u, v, m_xp, m_pexp, k0: first_k(u, v) }
}

/// Least `k0 >= 1` with `U V^k / k! < 1` for every `k >= k0`.
fn first_k(u: f64, v: f64) -> usize {
    // past k + 1 > V the terms decrease, so find one term below 1 there and
    // walk back while the terms stay below 1
    let mut k = (v.ceil() as usize).max(1);
    while ln_term(u, v, k) >= 0.0 {
        k += 1;
    }
    while k > 1 && ln_term(u, v, k - 1) < 0.0 {
        k -= 1;
    }
    k
}
