//! Concrete instances of the Hilbert-style transcendence argument.
//!
//! An instance is an integer polynomial `P` of degree `n` with `P(0) != 0`,
//! leading coefficient `α`, roots `s_1..s_n`, and an integer `a >= 1`. For
//! each `k` the auxiliary polynomial is
//!
//! ```text
//! f_k = X^k P^(k+1),   λ_k = α^(k + n(k+1)),   F_k = λ_k f_k
//! ```
//!
//! and the integral of `F_k e^-x` along `0 -> s_j -> ∞` splits into
//!
//! ```text
//! Q_k = a λ_k Σ_l β_l l!                      (f_k = Σ β_l x^l)
//! R_k = λ_k Σ_l c_l l!,   c_l = Σ_j H_l(s_j)  (f_k(t + s) = Σ H_l(s) t^l)
//! S_k = Σ_j e^(s_j) ∫_0^(s_j) F_k(x) e^-x dx
//! ```
//!
//! with `Q_k + R_k + S_k = (a + Σ_j e^(s_j)) N_k`, `N_k = Q_k / a`. `Q_k`,
//! `R_k` and `N_k` are exact integers; `c_l` comes from Newton power sums of
//! `P`, so no root approximation enters them. `S_k` is computed by
//! Gauss-Legendre quadrature along each segment.

mod decay;
mod lindemann;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algnum::format_approx;
use crate::numeric::{factorial, ComplexApprox, Rational, Real};
use crate::par::{self, Mode};
use crate::poly::{PolyError, UniPoly};
use crate::quadrature::integrate_segment;
use crate::roots::{find_roots, RootError};
use crate::symfun::{power_sums, SymError};

pub use decay::{decay_bound, DecayBound};
pub use lindemann::{lindemann_reduce, Lindemann, MAX_LINDEMANN_DEGREE};

const GUARD_BITS: u32 = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HilbertError {
    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("quadrature for k={k} did not settle at {prec} bits")]
    PrecisionExhausted { k: usize, prec: u32 },
    #[error("check `{check}` failed for k={k}: {detail}")]
    CheckFailed { k: usize, check: String, detail: String },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("degree {m} exceeds the cap of {cap}")]
    DegreeCapExceeded { m: usize, cap: usize },
    #[error("expected an integer, got {0}")]
    IntegralityViolation(String),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Debug)]
pub struct HilbertInstance {
    pub p: UniPoly,
    pub a: BigInt,
    /// All roots of `p` with multiplicity.
    pub roots: Vec<ComplexApprox>,
    pub prec: u32,
    /// Order of the zero at 0 that was stripped from the input.
    pub stripped: usize,
    /// Two distinct roots closer than `2^(-prec/4)`.
    pub clustered: bool,
}

impl HilbertInstance {
    pub fn degree(&self) -> usize {
        self.p.degree().expect("nonconstant")
    }

    pub fn alpha(&self) -> BigInt {
        self.p.leading().expect("nonzero").numer().clone()
    }

    pub fn p_at_zero(&self) -> BigInt {
        self.p.coeff(0).numer().clone()
    }

    /// `C = a α P(0)`.
    pub fn c_constant(&self) -> BigInt {
        &self.a * self.alpha() * self.p_at_zero()
    }

    /// `a + Σ_j e^(s_j)`.
    pub fn exp_sum(&self) -> ComplexApprox {
        let wp = self.prec + GUARD_BITS;
        self.roots.iter().fold(ComplexApprox::from_rational(&Rational::from_integer(self.a.clone()), wp), |acc, s| {
            acc.add(&s.with_prec(wp).exp(wp))
        })
    }
}

/// Square-free factorization `f = Π g_i^i` (Yun), as `(g_i, i)` pairs.
fn squarefree_factors(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_rem(&a0).expect("nonzero").0;
    let c = df.div_rem(&a0).expect("nonzero").0;
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let a = b.gcd(&d);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        let nb = b.div_rem(&a).expect("nonzero").0;
        let c = d.div_rem(&a).expect("nonzero").0;
        d = &c - &nb.derivative();
        b = nb;
        i += 1;
    }
    out
}

/// Roots with multiplicity, each square-free factor solved separately.
pub fn roots_with_multiplicity(p: &UniPoly, prec: u32) -> Result<Vec<ComplexApprox>, HilbertError> {
    let mut out = Vec::new();
    for (g, mult) in squarefree_factors(p) {
        for z in find_roots(&g, prec)? {
            out.extend(std::iter::repeat_n(z, mult));
        }
    }
    Ok(out)
}

fn integer_poly(p: &UniPoly, what: &str) -> Result<(), HilbertError> {
    if p.is_integral() {
        Ok(())
    } else {
        Err(HilbertError::InvalidInput(format!("{what} must have integer coefficients")))
    }
}

/// Strips the zero of order `v` at the origin: `P = P̂ / X^v`, `a = â + v`.
pub fn normalize_instance(p_hat: &UniPoly, a_hat: &BigInt, prec: u32) -> Result<HilbertInstance, HilbertError> {
    if p_hat.is_zero() {
        return Err(HilbertError::DegenerateInstance("zero polynomial".into()));
    }
    integer_poly(p_hat, "P")?;
    if a_hat < &BigInt::one() {
        return Err(HilbertError::InvalidInput(format!("a must be at least 1, got {a_hat}")));
    }
    let v = p_hat.zero_order();
    let p = p_hat.divide_by_x_pow(v);
    if p.is_constant() {
        return Err(HilbertError::DegenerateInstance(format!("{} has no nonzero roots", p_hat.to_compact_string("X"))));
    }
    let roots = roots_with_multiplicity(&p, prec + GUARD_BITS)?;
    let close = Real::pow2_up(-(prec as i64) / 4, prec);
    let mut clustered = false;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let d = roots[i].center_distance_upper(&roots[j]);
            if !d.is_zero() && d < close {
                clustered = true;
            }
        }
    }
    Ok(HilbertInstance { p, a: a_hat + BigInt::from(v), roots, prec, stripped: v, clustered })
}

/// `(f_k, λ_k)`.
pub fn build_fk(inst: &HilbertInstance, k: usize) -> (UniPoly, BigInt) {
    let n = inst.degree();
    let f = &UniPoly::monomial(Rational::one(), k) * &inst.p.pow(k as u32 + 1);
    let lambda = num_traits::pow(inst.alpha(), k + n * (k + 1));
    (f, lambda)
}

fn to_integer(q: &Rational, what: &str) -> Result<BigInt, HilbertError> {
    if q.is_integer() {
        Ok(q.numer().clone())
    } else {
        Err(HilbertError::IntegralityViolation(format!("{what} = {q}")))
    }
}

/// `(N_k, Q_k)` from `∫_0^∞ x^l e^-x dx = l!`.
#[allow(non_snake_case)]
pub fn compute_Nk_Qk(inst: &HilbertInstance, k: usize) -> Result<(BigInt, BigInt), HilbertError> {
    let (f, lambda) = build_fk(inst, k);
    let mut sum = BigInt::zero();
    for (l, beta) in f.coeffs().iter().enumerate() {
        sum += to_integer(beta, "β_l")? * factorial(l as u64);
    }
    let n = lambda * sum;
    let q = &inst.a * &n;
    Ok((n, q))
}

/// The exact sums `c_l = Σ_j H_l(s_j)` for `l = 0..=deg f_k`.
pub fn shifted_root_sums(inst: &HilbertInstance, k: usize) -> Result<Vec<Rational>, HilbertError> {
    let (f, _) = build_fk(inst, k);
    let h = f.shift_expand();
    let d = f.degree().expect("nonzero");
    let p = power_sums(&inst.p, d)?;
    Ok(h.iter()
        .map(|hl| hl.coeffs().iter().enumerate().fold(Rational::zero(), |acc, (t, c)| acc + c * &p[t]))
        .collect())
}

/// `R_k = λ_k Σ_l c_l l!`, asserting that each `λ_k c_l` is an integer.
#[allow(non_snake_case)]
pub fn compute_Rk(inst: &HilbertInstance, k: usize) -> Result<BigInt, HilbertError> {
    let (_, lambda) = build_fk(inst, k);
    let lam = Rational::from_integer(lambda);
    let mut r = BigInt::zero();
    for (l, c) in shifted_root_sums(inst, k)?.iter().enumerate() {
        r += to_integer(&(&lam * c), &format!("λ_{k} c_{l}"))? * factorial(l as u64);
    }
    Ok(r)
}

/// `S_k` by quadrature with `nodes` and `nodes / 2` points; the result is
/// widened by the difference of the two.
#[allow(non_snake_case)]
pub fn compute_Sk(inst: &HilbertInstance, k: usize, nodes: usize) -> Result<ComplexApprox, HilbertError> {
    let (f, lambda) = build_fk(inst, k);
    let deg = f.degree().expect("nonzero");
    // the low rule must still integrate the polynomial part exactly
    let hi = nodes.max(2 * (deg / 2 + 8));
    let lo = hi / 2;
    let prec = inst.prec;
    let wp = prec + GUARD_BITS;
    let integral = |nodes: usize| {
        inst.roots.iter().fold(ComplexApprox::zero(wp), |acc, s| {
            let s = s.with_prec(wp);
            let seg = integrate_segment(|x| f.eval_approx(x).mul(&x.neg().exp(wp)), &s, nodes, wp);
            acc.add(&s.exp(wp).mul(&seg))
        })
    };
    let lam = ComplexApprox::from_rational(&Rational::from_integer(lambda), wp);
    let s_hi = lam.mul(&integral(hi));
    let s_lo = lam.mul(&integral(lo));
    let diff = s_hi.sub(&s_lo).magnitude_upper();
    let scale = s_hi.abs_upper().max(Real::one(wp));
    if diff > Real::pow2_up(-(prec as i64) / 4, wp).mul(&scale) {
        return Err(HilbertError::PrecisionExhausted { k, prec });
    }
    Ok(s_hi.widen(&diff))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct KReport {
    pub k: usize,
    pub lambda: BigInt,
    pub n: BigInt,
    pub q: BigInt,
    pub r: BigInt,
    pub s: ComplexApprox,
    /// `|Q + R + S - (a + Σ e^(s_j)) N| / max(1, |N|)`, an upper bound.
    pub identity_residual: f64,
    pub checks: Vec<Check>,
}

impl KReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn ensure_passed(&self) -> Result<(), HilbertError> {
        match self.checks.iter().find(|c| !c.passed) {
            None => Ok(()),
            Some(c) => Err(HilbertError::CheckFailed { k: self.k, check: c.name.clone(), detail: c.detail.clone() }),
        }
    }
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

/// Runs the exact and numeric checks for one `k`:
///
/// - `q_is_a_n`: `Q_k = a N_k`;
/// - `low_sums_vanish`: `c_l = 0` for `l <= k`, and `low_terms_vanish`: each
///   `H_l(s_j)` is numerically zero there;
/// - `r_divisible`: `(k+1)! | R_k`;
/// - `q_congruence`: `Q_k / k! ≡ a λ_k P(0)^(k+1) (mod k+1)`;
/// - `nonzero` (only when `k` is a positive multiple of `|C|`):
///   `(Q_k + R_k) / k! != 0`;
/// - `identity`: the quadrature identity within `2^(-prec/3) max(1, |N_k|)`.
pub fn verify_k(inst: &HilbertInstance, k: usize, nodes: usize) -> Result<KReport, HilbertError> {
    let (f, lambda) = build_fk(inst, k);
    let (n, q) = compute_Nk_Qk(inst, k)?;
    let r = compute_Rk(inst, k)?;
    let s = compute_Sk(inst, k, nodes)?;
    let kf = factorial(k as u64);
    let k1 = BigInt::from(k + 1);
    let mut checks = Vec::new();

    checks.push(check("q_is_a_n", q == &inst.a * &n, ""));

    let c = shifted_root_sums(inst, k)?;
    let bad: Vec<usize> = (0..=k.min(c.len() - 1)).filter(|&l| !c[l].is_zero()).collect();
    checks.push(check(
        "low_sums_vanish",
        bad.is_empty(),
        if bad.is_empty() { String::new() } else { format!("c_l != 0 for l in {bad:?}") },
    ));
    checks.push(low_terms_vanish(inst, &f, k));

    let (_, rem) = r.div_rem(&factorial(k as u64 + 1));
    checks.push(check("r_divisible", rem.is_zero(), format!("R mod (k+1)! = {rem}")));

    let (qk, qrem) = q.div_rem(&kf);
    let lhs = qk.mod_floor(&k1);
    let rhs = (&inst.a * &lambda * num_traits::pow(inst.p_at_zero(), k + 1)).mod_floor(&k1);
    checks.push(check("q_congruence", qrem.is_zero() && lhs == rhs, format!("{lhs} vs {rhs} mod {k1}")));

    let cc = inst.c_constant().abs();
    if k > 0 && !cc.is_zero() && BigInt::from(k).is_multiple_of(&cc) {
        let (sum_k, srem) = (&q + &r).div_rem(&kf);
        checks.push(check("nonzero", srem.is_zero() && !sum_k.is_zero(), format!("(Q+R)/k! = {sum_k}")));
    }

    let wp = inst.prec + GUARD_BITS;
    let exact = ComplexApprox::from_rational(&Rational::from_integer(&q + &r), wp);
    let nn = ComplexApprox::from_rational(&Rational::from_integer(n.clone()), wp);
    let resid = exact.add(&s).sub(&inst.exp_sum().mul(&nn)).magnitude_upper();
    let scale = Real::from_integer(&n.abs(), wp).max(Real::one(wp));
    let rel = resid.div_up(&scale).expect("scale >= 1");
    let tol = Real::pow2_up(-(inst.prec as i64) / 3, wp);
    let identity_residual = rel.to_f64();
    checks.push(check("identity", rel <= tol, format!("{identity_residual:e}")));

    Ok(KReport { k, lambda, n, q, r, s, identity_residual, checks })
}

fn low_terms_vanish(inst: &HilbertInstance, f: &UniPoly, k: usize) -> Check {
    let h = f.shift_expand();
    let wp = inst.prec + GUARD_BITS;
    let tol = Real::pow2_up(-(inst.prec as i64) / 2, wp);
    let mut worst = 0.0f64;
    let mut ok = true;
    for hl in h.iter().take(k + 1) {
        for s in &inst.roots {
            let s = s.with_prec(wp);
            let v = hl.eval_approx(&s);
            let scale: f64 = hl
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| c.to_f64().unwrap_or(f64::INFINITY).abs() * s.to_c64().norm().max(1.0).powi(i as i32))
                .sum::<f64>()
                .max(1.0);
            let centered = v.abs_center_lower();
            let rel = centered.to_f64() / scale;
            worst = worst.max(rel);
            if !(v.contains_zero() || centered <= tol.mul(&Real::from_f64(scale.min(1e300), wp))) {
                ok = false;
            }
        }
    }
    check("low_terms_vanish", ok, format!("{worst:e}"))
}

/// `verify_k` for `k = 0..=kmax`, independent ks in parallel under `mode`.
pub fn verify_range(
    inst: &HilbertInstance,
    kmax: usize,
    nodes: usize,
    mode: Mode,
) -> Vec<Result<KReport, HilbertError>> {
    let ks: Vec<usize> = (0..=kmax).collect();
    par::map(mode, &ks, |&k| verify_k(inst, k, nodes))
}

/// `C^m mod (k+1) != 0` for `k` a positive multiple of `C`.
pub fn gregor_check(k: &BigInt, c: &BigInt, m: u32) -> Result<bool, HilbertError> {
    if k < &BigInt::one() {
        return Err(HilbertError::PreconditionViolated(format!("k must be at least 1, got {k}")));
    }
    if c.is_zero() || !k.is_multiple_of(c) {
        return Err(HilbertError::PreconditionViolated(format!("{k} is not a multiple of {c}")));
    }
    let modulus = k + BigInt::one();
    Ok(!c.modpow(&BigInt::from(m), &modulus).mod_floor(&modulus).is_zero())
}

/// Runs [`gregor_check`] on every `k = z C`; returns the failing
/// `(C, z, m)` triples.
pub fn gregor_sweep(
    cs: impl IntoIterator<Item = i64>,
    zs: std::ops::RangeInclusive<i64>,
    ms: std::ops::RangeInclusive<u32>,
) -> Result<Vec<(i64, i64, u32)>, HilbertError> {
    let mut failures = Vec::new();
    for c in cs.into_iter().filter(|&c| c != 0) {
        for z in zs.clone() {
            // k = z|C| keeps k positive for negative C
            let k = BigInt::from(z) * BigInt::from(c.abs());
            for m in ms.clone() {
                if !gregor_check(&k, &BigInt::from(c), m)? {
                    failures.push((c, z, m));
                }
            }
        }
    }
    Ok(failures)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ApproxJson {
    pub re: String,
    pub im: String,
    pub err: f64,
}

impl ApproxJson {
    fn from(z: &ComplexApprox) -> Self {
        ApproxJson { re: z.re().to_decimal_string(30), im: z.im().to_decimal_string(30), err: z.err().to_f64() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct KReportJson {
    pub k: usize,
    pub lambda: String,
    #[serde(rename = "N")]
    pub n: String,
    #[serde(rename = "Q")]
    pub q: String,
    #[serde(rename = "R")]
    pub r: String,
    #[serde(rename = "S")]
    pub s: ApproxJson,
    pub identity_residual: f64,
    pub checks: BTreeMap<String, String>,
}

impl From<&KReport> for KReportJson {
    fn from(r: &KReport) -> Self {
        KReportJson {
            k: r.k,
            lambda: r.lambda.to_string(),
            n: r.n.to_string(),
            q: r.q.to_string(),
            r: r.r.to_string(),
            s: ApproxJson::from(&r.s),
            identity_residual: r.identity_residual,
            checks: r
                .checks
                .iter()
                .map(|c| (c.name.clone(), if c.passed { "pass" } else { "fail" }.to_string()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DecayJson {
    #[serde(rename = "U")]
    pub u: f64,
    #[serde(rename = "V")]
    pub v: f64,
    pub k0: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HilbertReportJson {
    pub poly: String,
    pub a: String,
    pub prec: u32,
    pub nodes: usize,
    pub roots: Vec<ApproxJson>,
    #[serde(rename = "C")]
    pub c: String,
    pub exp_sum: ApproxJson,
    pub decay: DecayJson,
    pub reports: Vec<KReportJson>,
    pub errors: Vec<String>,
    pub passed: bool,
}

/// Collects per-k results into the JSON report shape.
pub fn report_json(
    inst: &HilbertInstance,
    nodes: usize,
    results: &[Result<KReport, HilbertError>],
    decay: &DecayBound,
) -> HilbertReportJson {
    let reports: Vec<KReportJson> = results.iter().filter_map(|r| r.as_ref().ok()).map(KReportJson::from).collect();
    let errors: Vec<String> = results.iter().filter_map(|r| r.as_ref().err()).map(|e| e.to_string()).collect();
    let passed = errors.is_empty() && results.iter().flatten().all(|r| r.passed());
    HilbertReportJson {
        poly: inst.p.to_compact_string("X"),
        a: inst.a.to_string(),
        prec: inst.prec,
        nodes,
        roots: inst.roots.iter().map(ApproxJson::from).collect(),
        c: inst.c_constant().to_string(),
        exp_sum: ApproxJson::from(&inst.exp_sum()),
        decay: DecayJson { u: decay.u, v: decay.v, k0: decay.k0 },
        reports,
        errors,
        passed,
    }
}

/// One line per k for terminal output.
pub fn format_report_line(r: &KReport) -> String {
    let checks: Vec<String> =
        r.checks.iter().map(|c| format!("{}={}", c.name, if c.passed { "pass" } else { "FAIL" })).collect();
    format!(
        "k={} lambda={} N={} Q={} R={} S={} residual={:.2e} {}",
        r.k,
        r.lambda,
        r.n,
        r.q,
        r.r,
        format_approx(&r.s, 20),
        r.identity_residual,
        checks.join(" ")
    )
}

#[cfg(test)]
mod tests;
