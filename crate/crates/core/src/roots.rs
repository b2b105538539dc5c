//! Simultaneous root finding for polynomials with rational coefficients.
//!
//! Aberth iteration runs first in `f64` to get close cheaply, then again on
//! fixed-point complex values at the requested precision. Each returned root
//! carries an inclusion radius that is guaranteed to contain a root of `f`:
//! the smaller of `n |f(z)| / |f'(z)|` and `(|f(z)| / |a_n|)^(1/n)`.

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::numeric::{ComplexApprox, Real, MIN_PREC};
use crate::poly::UniPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("root finding needs a polynomial of degree at least 1")]
    ConstantPolynomial,
    #[error("root iteration did not converge for degree {degree} at {prec} bits")]
    ConvergenceFailure { degree: usize, prec: u32 },
}

const GUARD_BITS: u32 = 32;

/// All roots of `f` with multiplicity, each with an inclusion radius as its
/// error. Repeated roots converge slowly and come back with wide radii.
pub fn find_roots(f: &UniPoly, prec: u32) -> Result<Vec<ComplexApprox>, RootError> {
    let n = match f.degree() {
        None | Some(0) => return Err(RootError::ConstantPolynomial),
        Some(n) => n,
    };
    let prec = prec.max(MIN_PREC);
    if n == 1 {
        let r = -f.coeff(0) / f.coeff(1);
        let z = ComplexApprox::from_rational(&r, prec);
        let err = z.err().clone();
        return Ok(vec![z.center().with_err(err)]);
    }
    let start = aberth_f64(f);
    let wp = prec + GUARD_BITS;
    let coeffs: Vec<ComplexApprox> = f.coeffs().iter().map(|c| ComplexApprox::from_rational(c, wp)).collect();
    let dcoeffs: Vec<ComplexApprox> =
        f.derivative().coeffs().iter().map(|c| ComplexApprox::from_rational(c, wp)).collect();
    let mut zs: Vec<ComplexApprox> = start.iter().map(|z| ComplexApprox::from_f64(z.re, z.im, wp)).collect();
    let tol = Real::pow2_up(-(prec as i64) - 8, wp);
    let mut active = vec![true; n];
    let cap = 2 * wp as usize + 64;
    for _ in 0..cap {
        if !active.iter().any(|&a| a) {
            break;
        }
        for i in 0..n {
            if !active[i] {
                continue;
            }
            let fz = horner(&coeffs, &zs[i]);
            let dz = horner(&dcoeffs, &zs[i]);
            if fz.re().is_zero() && fz.im().is_zero() {
                active[i] = false;
                continue;
            }
            let Ok(w) = fz.div(&dz) else {
                // f' vanishes at the iterate: nudge it and try again
                zs[i] = zs[i].add(&ComplexApprox::from_f64(1e-3, 1e-3, wp)).center();
                continue;
            };
            let mut s = ComplexApprox::zero(wp);
            for j in 0..n {
                if j != i {
                    if let Ok(r) = zs[i].sub(&zs[j]).center().recip() {
                        s = s.add(&r);
                    }
                }
            }
            let denom = ComplexApprox::one(wp).sub(&w.mul(&s));
            let step = w.div(&denom).unwrap_or(w).center();
            zs[i] = zs[i].sub(&step).center();
            if step.abs_upper() <= tol.mul(&zs[i].abs_upper().max(Real::one(wp))) {
                active[i] = false;
            }
        }
    }
    let lead_abs = Real::from_rational(&f.leading().expect("nonzero").abs(), wp);
    let roots: Vec<ComplexApprox> = zs
        .iter()
        .map(|z| {
            let z = z.center();
            let r = inclusion_radius(f, &z, n, &lead_abs, wp);
            z.with_prec(prec).center().with_err(r.with_prec_up(prec))
        })
        .collect();
    let loose = Real::pow2_up(-(prec as i64) / 8, prec);
    for z in &roots {
        let scale = z.abs_upper().max(Real::one(prec));
        if z.err() > &loose.mul(&scale) {
            return Err(RootError::ConvergenceFailure { degree: n, prec });
        }
    }
    Ok(roots)
}

fn horner(coeffs: &[ComplexApprox], z: &ComplexApprox) -> ComplexApprox {
    let mut acc = ComplexApprox::zero(z.prec());
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(c).center();
    }
    acc
}

/// Radius of a disk around `z` that certainly contains a root of `f`.
pub fn inclusion_radius(f: &UniPoly, z: &ComplexApprox, n: usize, lead_abs: &Real, prec: u32) -> Real {
    let z = z.center();
    let fz = f.eval_approx(&z);
    let f_up = fz.magnitude_upper();
    if f_up.is_zero() {
        return Real::zero(prec);
    }
    let by_power = match (f_up.div_up(lead_abs).and_then(|q| q.log2_upper()), lead_abs.is_zero()) {
        (Some(e), false) => Real::pow2_up(e.div_euclid(n as i64) + 1, prec),
        _ => Real::pow2_up(64, prec),
    };
    let d_low = f.derivative().eval_approx(&z).magnitude_lower();
    if d_low.is_zero() {
        return by_power;
    }
    let by_newton = f_up.mul_int(&(n as i64).into()).div_up(&d_low).unwrap_or_else(|| by_power.clone());
    by_newton.min(by_power)
}

/// Newton refinement of one root from `z0` at precision `prec`, returning
/// the polished value with an inclusion radius.
pub fn polish_root(f: &UniPoly, z0: &ComplexApprox, prec: u32, max_iter: usize) -> ComplexApprox {
    let n = f.degree().unwrap_or(0).max(1);
    let wp = prec + GUARD_BITS;
    let df = f.derivative();
    let mut z = z0.with_prec(wp).center();
    let tol = Real::pow2_up(-(prec as i64) - 4, wp);
    for _ in 0..max_iter {
        let fz = f.eval_approx(&z).center();
        let dz = df.eval_approx(&z).center();
        let Ok(step) = fz.div(&dz) else { break };
        let step = step.center();
        z = z.sub(&step).center();
        if step.abs_upper() <= tol.mul(&z.abs_upper().max(Real::one(wp))) {
            break;
        }
    }
    let lead_abs = Real::from_rational(&f.leading().expect("nonzero").abs(), wp);
    let r = inclusion_radius(f, &z, n, &lead_abs, wp);
    z.with_prec(prec).center().with_err(r.with_prec_up(prec))
}

/// Aberth iteration in double precision on the monic normalization of `f`.
fn aberth_f64(f: &UniPoly) -> Vec<Complex64> {
    let n = f.degree().expect("nonzero");
    let lead = f.leading().expect("nonzero").clone();
    let c: Vec<f64> = f.coeffs().iter().map(|a| (a / &lead).to_f64().unwrap_or(0.0)).collect();
    let dc: Vec<f64> = (1..=n).map(|i| c[i] * i as f64).collect();
    let eval = |cs: &[f64], z: Complex64| cs.iter().rev().fold(Complex64::zero(), |a, &k| a * z + k);
    // Fujiwara bound on the root moduli
    let bound = (1..=n).map(|k| c[n - k].abs().powf(1.0 / k as f64)).fold(0.0f64, f64::max) * 2.0;
    let radius = if bound.is_finite() && bound > 0.0 { bound / 2.0 } else { 1.0 };
    let mut zs: Vec<Complex64> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, t)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let fz = eval(&c, zs[i]);
            let dz = eval(&dc, zs[i]);
            if fz == Complex64::zero() {
                continue;
            }
            let w = fz / dz;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (zs[i] - zs[j])).sum();
            let step = w / (1.0 - w * s);
            if step.is_finite() {
                zs[i] -= step;
                moved = moved.max(step.norm() / (1.0 + zs[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    // keep the iterates distinct and finite for the high-precision phase
    for (k, z) in zs.iter_mut().enumerate() {
        if !z.is_finite() {
            *z = Complex64::from_polar(radius, 0.4 + k as f64);
        }
    }
    zs
}
