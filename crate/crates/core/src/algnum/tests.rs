use super::*;
use proptest::prelude::*;

fn up(s: &str) -> UniPoly {
    UniPoly::parse(s).unwrap()
}

fn q(n: i64, d: i64) -> AlgebraicNumber {
    AlgebraicNumber::from_rational(&Rational::new(n.into(), d.into()))
}

fn sqrt_of(n: i64) -> AlgebraicNumber {
    AlgebraicNumber::from_i64(n).sqrt().unwrap()
}

#[test]
fn rationals() {
    assert_eq!(AlgebraicNumber::from_i64(2).ann(), &up("x - 2"));
    assert_eq!(q(1, 2).ann(), &up("2*x - 1"));
    assert_eq!(AlgebraicNumber::zero().ann(), &up("x"));
    assert_eq!(q(1, 2).add(&q(1, 3)).unwrap().ann(), &up("6*x - 5"));
}

/// `(a + b√2)` arithmetic for an exact oracle over Q(√2).
#[derive(Clone, Debug, PartialEq)]
struct Q2(Rational, Rational);

fn q2_mul(x: &Q2, y: &Q2) -> Q2 {
    let two = Rational::from_integer(2.into());
    Q2(&x.0 * &y.0 + &two * &x.1 * &y.1, &x.0 * &y.1 + &x.1 * &y.0)
}

fn poly_mul(a: &[Q2], b: &[Q2]) -> Vec<Q2> {
    let z = Q2(Rational::zero(), Rational::zero());
    let mut out = vec![z; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let t = q2_mul(x, y);
            out[i + j] = Q2(&out[i + j].0 + &t.0, &out[i + j].1 + &t.1);
        }
    }
    out
}

#[test]
fn sum_of_square_roots_matches_conjugate_product() {
    // the four linear factors x - (±√2 ± √3) pair up into quadratics over
    // Q(√2): (x ∓ √2)^2 - 3
    let r = |n: i64| Rational::from_integer(n.into());
    let quad = |s: i64| vec![Q2(r(-1), r(0)), Q2(r(0), r(-2 * s)), Q2(r(1), r(0))];
    let prod = poly_mul(&quad(1), &quad(-1));
    assert!(prod.iter().all(|c| c.1.is_zero()));
    let want = UniPoly::from_coeffs(prod.into_iter().map(|c| c.0).collect());
    let got = sqrt_of(2).add(&sqrt_of(3)).unwrap();
    assert_eq!(got.ann(), &want);
    assert!((got.to_f64_pair().0 - (2f64.sqrt() + 3f64.sqrt())).abs() < 1e-14);
}

#[test]
fn products() {
    assert_eq!(sqrt_of(2).mul(&sqrt_of(3)).unwrap().ann(), &up("x^2 - 6"));
    let two = sqrt_of(2).mul(&sqrt_of(2)).unwrap();
    assert_eq!(two.ann(), &up("x - 2"));
    assert_eq!(two.as_rational(), Some(Rational::from_integer(2.into())));
    let a = sqrt_of(5);
    let b = a.mul(&AlgebraicNumber::one()).unwrap();
    assert_eq!(b.ann(), a.ann());
    assert!(b.sub(&a).unwrap().is_zero().unwrap());
}

#[test]
fn adding_zero_keeps_the_root() {
    let a = sqrt_of(2).add(&sqrt_of(3)).unwrap();
    let b = a.add(&AlgebraicNumber::zero()).unwrap();
    assert_eq!(a.ann(), b.ann());
    assert!(b.approx().overlaps(a.approx()));
}

#[test]
fn unary_operations() {
    let s2 = sqrt_of(2);
    assert_eq!(s2.ann(), &up("x^2 - 2"));
    let n = s2.neg();
    assert_eq!(n.ann(), &up("x^2 - 2"));
    assert!((n.to_f64_pair().0 + std::f64::consts::SQRT_2).abs() < 1e-12);
    assert_eq!(s2.inv().unwrap().ann(), &up("2*x^2 - 1"));
    let r4 = s2.sqrt().unwrap();
    assert_eq!(r4.ann(), &up("x^4 - 2"));
    assert!((r4.to_f64_pair().0 - 2f64.powf(0.25)).abs() < 1e-14);
}

#[test]
fn sqrt_branches() {
    let i = AlgebraicNumber::from_i64(-1).sqrt().unwrap();
    assert_eq!(i.ann(), &up("x^2 + 1"));
    let (re, im) = i.to_f64_pair();
    assert!(re.abs() < 1e-30 && (im - 1.0).abs() < 1e-30);
    assert!(!i.is_real().unwrap());
    assert_eq!(i.real_sign().unwrap(), None);
    // principal root of i is (1 + i)/√2
    let w = i.sqrt().unwrap();
    let (re, im) = w.to_f64_pair();
    let h = 0.5f64.sqrt();
    assert!((re - h).abs() < 1e-14 && (im - h).abs() < 1e-14);
    assert!(AlgebraicNumber::zero().sqrt().unwrap().is_zero().unwrap());
}

#[test]
fn zero_tests() {
    assert!(AlgebraicNumber::zero().is_zero().unwrap());
    assert!(!sqrt_of(2).is_zero().unwrap());
    let z = sqrt_of(2).add(&sqrt_of(2).neg()).unwrap();
    assert!(z.is_zero().unwrap());
    // a non-rational value whose annihilator has 0 as a root
    let a = AlgebraicNumber::from_root(
        &up("x^3 - 2*x"),
        &ComplexApprox::from_f64(1.414, 0.0, 64).widen(&Real::from_f64(0.01, 64)),
    )
    .unwrap();
    assert!(!a.is_zero().unwrap());
    assert!(matches!(AlgebraicNumber::zero().inv(), Err(AlgError::ZeroDivision)));
}

#[test]
fn refinement_matches_integer_square_root() {
    let target = Real::from_rational(&Rational::new(1.into(), BigInt::from(10).pow(50)), 256);
    let r = sqrt_of(2).refine(&target).unwrap();
    assert!(r.approx().err() <= &target);
    // floor(√2 · 10^60)
    let want = (BigInt::from(2) * BigInt::from(10).pow(120)).sqrt().to_string();
    let got = r.approx().re().to_decimal_string(60).replace('.', "");
    assert_eq!(&got[..51], &want[..51]);
    let again = r.refine(&target).unwrap();
    assert_eq!(again, r);
    let exact = q(3, 7).refine(&target).unwrap();
    assert_eq!(exact.as_rational(), Some(Rational::new(3.into(), 7.into())));
    assert!(exact.approx().err() <= &target);
    assert!(AlgebraicNumber::from_i64(5).refine(&target).unwrap().approx().err().is_zero());
}

#[test]
fn residual_vanishes_at_256_bits() {
    let a = sqrt_of(2).add(&sqrt_of(3)).unwrap().mul(&sqrt_of(5)).unwrap();
    let r = a.refine_prec(256).unwrap();
    assert!(r.residual_f64() <= 1e-30);
    assert!(a.degree() <= 8);
}

#[test]
fn involutions() {
    let a = sqrt_of(3).add(&q(1, 2)).unwrap();
    let b = a.inv().unwrap().inv().unwrap();
    assert!(b.sub(&a).unwrap().is_zero().unwrap());
    let c = a.neg().neg();
    assert_eq!(c.ann(), a.ann());
    assert!(c.sub(&a).unwrap().is_zero().unwrap());
}

#[test]
fn signs_and_comparison() {
    let a = sqrt_of(2).add(&sqrt_of(3)).unwrap();
    assert_eq!(a.real_sign().unwrap(), Some(Ordering::Greater));
    assert_eq!(a.neg().real_sign().unwrap(), Some(Ordering::Less));
    let b = sqrt_of(10);
    // √2 + √3 ≈ 3.146 < √10 ≈ 3.162
    assert_eq!(a.cmp_real(&b).unwrap(), Some(Ordering::Less));
    assert!(a.is_real().unwrap());
}

#[test]
fn payload_round_trip() {
    let a = sqrt_of(2).add(&sqrt_of(3)).unwrap();
    let p = a.to_payload().unwrap();
    assert!(verify_payload(&p).unwrap());
    assert!(p.err_exp < -100);
    let back = AlgebraicNumber::from_payload(&p).unwrap();
    assert!(back.sub(&a).unwrap().is_zero().unwrap());
    let mut bad = p.clone();
    bad.approx_re = "3.2".into();
    assert!(!verify_payload(&bad).unwrap());
    let json = serde_json::to_string(&p).unwrap();
    assert_eq!(serde_json::from_str::<AlgPayload>(&json).unwrap(), p);
}

#[test]
fn expression_evaluator() {
    let a = eval_str("sqrt(2) + sqrt(3)").unwrap();
    assert_eq!(a.ann(), &up("x^4 - 10*x^2 + 1"));
    assert_eq!(eval_str("(1/2)^3 - 1/8").unwrap().as_rational(), Some(Rational::zero()));
    assert!(matches!(eval_str("1/(sqrt(2) - sqrt(2))"), Err(AlgError::ZeroDivision)));
    assert!(matches!(eval_str("cbrt(2)"), Err(AlgError::Unsupported(_))));
    assert_eq!(format!("{:.5}", eval_str("sqrt(-4)").unwrap()), "x^2+4 ~ 0 + 2*i");
}

fn operand() -> impl Strategy<Value = AlgebraicNumber> {
    prop_oneof![
        (-6i64..7, 1i64..5).prop_map(|(n, d)| q(n, d)),
        (1i64..12).prop_map(sqrt_of),
        (1i64..12).prop_map(|n| sqrt_of(n).neg()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ring_laws(a in operand(), b in operand()) {
        let ab = a.add(&b).unwrap();
        prop_assert!(ab.degree() <= a.degree() * b.degree());
        prop_assert!(ab.sub(&b.add(&a).unwrap()).unwrap().is_zero().unwrap());
        let p = a.mul(&b).unwrap();
        prop_assert!(p.degree() <= a.degree() * b.degree());
        prop_assert!(p.sub(&b.mul(&a).unwrap()).unwrap().is_zero().unwrap());
    }

    #[test]
    fn square_of_square_root(n in 0i64..40, d in 1i64..6) {
        let a = q(n, d).add(&sqrt_of(n + 1)).unwrap();
        let s = a.sqrt().unwrap();
        prop_assert!(s.mul(&s).unwrap().sub(&a).unwrap().is_zero().unwrap());
    }
}
