use super::*;
use crate::poly::MultiPoly;
use crate::symfun::eval_on_roots;

fn up(s: &str) -> UniPoly {
    UniPoly::parse(s).unwrap()
}

fn inst(p: &str, a: i64) -> HilbertInstance {
    normalize_instance(&up(p), &BigInt::from(a), 256).unwrap()
}

/// `Π_S (X - Σ_{i∈S} r_i)` over nonempty subsets, expanded directly.
fn subset_sum_poly(roots: &[Rational], leading: &Rational) -> UniPoly {
    let m = roots.len();
    let sums: Vec<Rational> =
        (1usize..(1 << m)).map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).map(|i| roots[i].clone()).sum()).collect();
    UniPoly::from_roots(&sums, num_traits::pow(leading.clone(), sums.len()))
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

#[test]
fn normalization() {
    let i = inst("X^3 + X", 1);
    assert_eq!((i.p.clone(), i.a.clone(), i.stripped), (up("X^2 + 1"), big(2), 1));
    let i = inst("X^2 + 1", 1);
    assert_eq!((i.p.clone(), i.a.clone()), (up("X^2 + 1"), big(1)));
    assert_eq!(i.roots.len(), 2);
    assert!(matches!(normalize_instance(&up("X^2"), &big(1), 128), Err(HilbertError::DegenerateInstance(_))));
    assert!(matches!(normalize_instance(&up("X - 1/2"), &big(1), 128), Err(HilbertError::InvalidInput(_))));
    assert!(matches!(normalize_instance(&up("X - 1"), &big(0), 128), Err(HilbertError::InvalidInput(_))));
}

#[test]
fn repeated_roots_keep_multiplicity() {
    let i = inst("(X - 1)^2*(X + 2)", 1);
    assert_eq!(i.roots.len(), 3);
    let ones = i.roots.iter().filter(|z| (z.to_c64().re - 1.0).abs() < 1e-30).count();
    assert_eq!(ones, 2);
    assert!(!i.clustered);
}

#[test]
fn auxiliary_polynomials() {
    let (f, l) = build_fk(&inst("X^2 + 1", 1), 0);
    assert_eq!((f, l), (up("X^2 + 1"), big(1)));
    let (f, _) = build_fk(&inst("X^2 + 1", 1), 1);
    assert_eq!(f, up("X^5 + 2*X^3 + X"));
    let (f, _) = build_fk(&inst("X - 1", 1), 1);
    assert_eq!(f, up("X^3 - 2*X^2 + X"));
    let i = inst("3*X^2 - 2", 1);
    for k in 0..4 {
        let (f, l) = build_fk(&i, k);
        assert_eq!(f.leading().unwrap(), &Rational::from_integer(num_traits::pow(big(3), k + 1)));
        assert_eq!(f.degree(), Some(k + 2 * (k + 1)));
        assert_eq!(l, num_traits::pow(big(3), k + 2 * (k + 1)));
    }
}

#[test]
fn n_and_q() {
    assert_eq!(compute_Nk_Qk(&inst("X - 1", 1), 0).unwrap(), (big(0), big(0)));
    assert_eq!(compute_Nk_Qk(&inst("X^2 + 1", 2), 0).unwrap(), (big(3), big(6)));
    // f_1 = X^5 + 2X^3 + X, λ_1 = 1: 5! + 2·3! + 1! = 133
    assert_eq!(compute_Nk_Qk(&inst("X^2 + 1", 2), 1).unwrap(), (big(133), big(266)));
}

#[test]
fn r_examples() {
    assert_eq!(compute_Rk(&inst("X - 1", 1), 0).unwrap(), big(1));
    let i = inst("X^2 + 1", 2);
    let c = shifted_root_sums(&i, 0).unwrap();
    let r = |n: i64| Rational::from_integer(n.into());
    // f_0(t + s) = t^2 + 2st + (s^2 + 1), so c_1 = 2 p_1 = 0 and c_2 = 2
    assert_eq!(c, vec![r(0), r(0), r(2)]);
    assert_eq!(compute_Rk(&i, 0).unwrap(), big(4));
    for k in 0..=6u64 {
        let rk = compute_Rk(&i, k as usize).unwrap();
        assert!((rk % factorial(k + 1)).is_zero(), "k={k}");
    }
}

#[test]
fn shifted_sums_match_symmetric_route() {
    // c_l = Σ_j H_l(s_j) equals α^-deg times eval_on_roots of the symmetric
    // polynomial Σ_j H_l(x_j)
    for (p, k) in [("X^2 + 1", 1), ("2*X^2 - 3*X + 5", 0), ("X^3 - X + 2", 1), ("3*X - 1", 2)] {
        let i = inst(p, 1);
        let n = i.degree();
        let (f, _) = build_fk(&i, k);
        let c = shifted_root_sums(&i, k).unwrap();
        for (l, hl) in f.shift_expand().iter().enumerate() {
            let mut sym = MultiPoly::zero(n);
            for j in 0..n {
                for (t, coef) in hl.coeffs().iter().enumerate() {
                    let term = MultiPoly::var(n, j).pow(t as u32).scale(coef);
                    sym = sym.try_add(&term).unwrap();
                }
            }
            let scaled = eval_on_roots(&sym, &i.p).unwrap();
            let deg = sym.total_degree().unwrap_or(0) as usize;
            let alpha = Rational::from_integer(i.alpha());
            assert_eq!(scaled, &c[l] * num_traits::pow(alpha, deg), "{p} k={k} l={l}");
        }
    }
}

#[test]
fn s_closed_form() {
    // e ∫_0^1 (x - 1) e^-x dx = e [-x e^-x]_0^1 = -1
    let s = compute_Sk(&inst("X - 1", 1), 0, 64).unwrap();
    assert!(s.sub(&ComplexApprox::from_f64(-1.0, 0.0, 256)).magnitude_upper().to_f64() < 1e-30);
}

#[test]
fn s_is_real_for_conjugate_roots_and_converges() {
    let i = inst("X^2 + 1", 2);
    let s = compute_Sk(&i, 3, 64).unwrap();
    assert!(s.im().to_f64().abs() <= s.err().to_f64() + 1e-60);
    let j = normalize_instance(&up("X^2 + 1"), &big(2), 512).unwrap();
    let s2 = compute_Sk(&j, 3, 64).unwrap();
    let d = s.sub(&s2).magnitude_upper().to_f64();
    assert!(d < 2f64.powi(-128), "{d}");
}

#[test]
fn verify_examples() {
    let i = inst("X^2 + 1", 2);
    let rep = verify_k(&i, 2, 64).unwrap();
    assert!(rep.passed(), "{:?}", rep.checks);
    assert_eq!(rep.lambda, big(1));
    assert!(rep.check("nonzero").unwrap().passed);
    let qk = &rep.q / factorial(2);
    assert_eq!(qk.mod_floor(&big(3)), big(2));
    let j = inst("X - 1", 1);
    let rep = verify_k(&j, 0, 64).unwrap();
    assert_eq!((rep.n.clone(), rep.q.clone(), rep.r.clone()), (big(0), big(0), big(1)));
    assert!(rep.passed(), "{:?}", rep.checks);
    for k in 0..=8 {
        let rep = verify_k(&i, k, 64).unwrap();
        assert!(rep.passed(), "k={k} {:?}", rep.checks);
        assert!(rep.identity_residual < 1e-25);
    }
}

#[test]
fn nonunit_leading_coefficient() {
    let i = inst("2*X^2 - 3*X + 5", 3);
    for r in verify_range(&i, 4, 64, Mode::Sequential) {
        let r = r.unwrap();
        assert!(r.passed(), "k={} {:?}", r.k, r.checks);
    }
}

#[test]
fn parallel_matches_sequential() {
    let i = inst("X^2 + 1", 2);
    let a: Vec<String> =
        verify_range(&i, 4, 32, Mode::Sequential).iter().map(|r| format_report_line(r.as_ref().unwrap())).collect();
    let b: Vec<String> =
        verify_range(&i, 4, 32, Mode::Parallel).iter().map(|r| format_report_line(r.as_ref().unwrap())).collect();
    assert_eq!(a, b);
}

#[test]
fn decay_example() {
    let i = inst("X^2 + 1", 2);
    let d = decay_bound(&i);
    let m = 2.0 / (3.0 * 3f64.sqrt());
    assert!((d.m_xp - m).abs() < 1e-8 && d.m_xp >= m);
    assert!((d.v - m).abs() < 1e-8);
    assert!((d.u - 2.0).abs() < 1e-8);
    assert_eq!(d.k0, 1);
    for k in 1..=8 {
        let s = compute_Sk(&i, k, 64).unwrap();
        assert!(s.abs_upper().to_f64() <= d.bound(k), "k={k}");
        assert!(d.ratio_term(k) < 1.0);
    }
}

#[test]
fn gregor() {
    assert!(gregor_check(&big(4), &big(2), 10).unwrap());
    assert!(gregor_check(&big(6), &big(3), 5).unwrap());
    assert!(matches!(gregor_check(&big(5), &big(2), 3), Err(HilbertError::PreconditionViolated(_))));
    assert!(matches!(gregor_check(&big(0), &big(2), 3), Err(HilbertError::PreconditionViolated(_))));
    assert!(gregor_sweep(-12..=12, 1..=12, 1..=9).unwrap().is_empty());
}

#[test]
fn lindemann_examples() {
    let l = lindemann_reduce(&up("X^2 + 1"), 128, Mode::Sequential).unwrap();
    assert_eq!(l.p_hat, up("X^3 + X"));
    assert_eq!((l.instance.p.clone(), l.instance.a.clone()), (up("X^2 + 1"), big(2)));
    let l = lindemann_reduce(&up("2*X - 1"), 128, Mode::Sequential).unwrap();
    assert_eq!((l.instance.p.clone(), l.instance.a.clone()), (up("2*X - 1"), big(1)));
    // 2 + e^i + e^-i = 2 + 2 cos 1
    let v = inst("X^2 + 1", 2).exp_sum();
    assert!((v.re().to_f64() - (2.0 + 2.0 * 1f64.cos())).abs() < 1e-15);
    assert!(matches!(
        lindemann_reduce(&up("X^5 + 1"), 128, Mode::Sequential),
        Err(HilbertError::DegreeCapExceeded { m: 5, cap: 4 })
    ));
}

#[test]
fn lindemann_matches_rational_subset_sums() {
    // Q with rational roots 1, -2, 3/2: the symmetric route must agree with
    // expanding the subset sums directly
    let q = up("2*X^3 - X^2 - 7*X + 6");
    let roots: Vec<Rational> =
        [(1, 1), (-2, 1), (3, 2)].iter().map(|&(a, b)| Rational::new(a.into(), b.into())).collect();
    assert!(roots.iter().all(|r| q.eval(r).is_zero()));
    let l = lindemann_reduce(&q, 128, Mode::Parallel).unwrap();
    assert_eq!(l.p_hat, subset_sum_poly(&roots, &Rational::from_integer(2.into())));
}

#[test]
fn lindemann_degree_four() {
    let l = lindemann_reduce(&up("X^4 + X + 1"), 128, Mode::Parallel).unwrap();
    assert_eq!(l.p_hat.degree(), Some(15));
    assert!(l.p_hat.is_integral());
}
