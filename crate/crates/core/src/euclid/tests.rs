use super::*;
use crate::poly::UniPoly;

fn n(v: i64) -> AlgebraicNumber {
    AlgebraicNumber::from_i64(v)
}

fn rat(a: &AlgebraicNumber) -> Option<Rational> {
    a.as_rational()
}

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

fn line(a: i64, b: i64, c: i64) -> Line {
    Line { a: n(a), b: n(b), c: n(c) }
}

fn unit_circle() -> Circle {
    Circle { x0: n(0), y0: n(0), r: n(1) }
}

fn is_at(p: &Point, x: Rational, y: Rational) -> bool {
    rat(&p.x) == Some(x) && rat(&p.y) == Some(y)
}

#[test]
fn lines_through_points() {
    let l = line_through(&Point::from_i64(0, 0), &Point::from_i64(1, 0)).unwrap();
    assert_eq!((rat(&l.a), rat(&l.b), rat(&l.c)), (Some(r(0, 1)), Some(r(1, 1)), Some(r(0, 1))));
    let (p, q) = (Point::from_i64(1, 2), Point::from_i64(3, 5));
    let l = line_through(&p, &q).unwrap();
    assert_eq!((rat(&l.a), rat(&l.b), rat(&l.c)), (Some(r(-3, 1)), Some(r(2, 1)), Some(r(1, 1))));
    assert!(l.residual(&p).unwrap().is_zero().unwrap() && l.residual(&q).unwrap().is_zero().unwrap());
    let l = line_through(&Point::from_i64(0, 0), &Point::from_i64(0, 1)).unwrap();
    assert_eq!((rat(&l.a), rat(&l.b), rat(&l.c)), (Some(r(-1, 1)), Some(r(0, 1)), Some(r(0, 1))));
    let a = Point::from_i64(2, 2);
    assert_eq!(line_through(&a, &a), Err(EuclidError::CoincidentPoints));
}

#[test]
fn circles_around_points() {
    let c = circle_around_through(&Point::from_i64(0, 0), &Point::from_i64(1, 0)).unwrap();
    assert_eq!(rat(&c.r), Some(r(1, 1)));
    let c = circle_around_through(&Point::from_i64(0, 0), &Point::from_i64(1, 1)).unwrap();
    assert_eq!(c.r.ann(), &UniPoly::parse("x^2 - 2").unwrap());
    assert!(c.r.refine_prec(256).unwrap().residual_f64() < 1e-30);
    let c = circle_around_through(&Point::from_i64(1, 0), &Point::from_i64(0, 0)).unwrap();
    assert_eq!(rat(&c.r), Some(r(1, 1)));
}

#[test]
fn line_line() {
    let p = intersect_lines(&line(1, 0, 1), &line(0, 1, 2)).unwrap();
    assert!(is_at(&p, r(1, 1), r(2, 1)));
    // y = x and y = -x + 2
    let p = intersect_lines(&line(1, -1, 0), &line(1, 1, 2)).unwrap();
    assert!(is_at(&p, r(1, 1), r(1, 1)));
    assert_eq!(intersect_lines(&line(1, 0, 0), &line(1, 0, 1)), Err(EuclidError::ParallelLines));
}

#[test]
fn line_circle() {
    let pts = intersect_line_circle(&line(0, 1, 0), &unit_circle()).unwrap();
    assert!(is_at(&pts[0], r(-1, 1), r(0, 1)) && is_at(&pts[1], r(1, 1), r(0, 1)));
    let l = line(1, 1, 1);
    let pts = intersect_line_circle(&l, &unit_circle()).unwrap();
    assert!(is_at(&pts[0], r(0, 1), r(1, 1)) && is_at(&pts[1], r(1, 1), r(0, 1)));
    for p in &pts {
        assert!(l.residual(p).unwrap().is_zero().unwrap());
        assert!(unit_circle().residual(p).unwrap().is_zero().unwrap());
    }
    assert!(intersect_line_circle(&line(0, 1, 2), &unit_circle()).unwrap().is_empty());
    // vertical line x = 1/2 takes the mirrored branch
    let l = Line { a: n(2), b: n(0), c: n(1) };
    let pts = intersect_line_circle(&l, &unit_circle()).unwrap();
    assert_eq!(pts.len(), 2);
    assert_eq!(pts[1].y.ann(), &UniPoly::parse("4*x^2 - 3").unwrap());
    assert_eq!(pts[1].y.real_sign().unwrap(), Some(Ordering::Greater));
    // tangent
    let pts = intersect_line_circle(&line(1, 0, 1), &unit_circle()).unwrap();
    assert_eq!(pts.len(), 1);
    assert!(is_at(&pts[0], r(1, 1), r(0, 1)));
}

#[test]
fn circle_circle() {
    let c2 = Circle { x0: n(1), y0: n(0), r: n(1) };
    let pts = intersect_circles(&unit_circle(), &c2).unwrap();
    assert_eq!(pts.len(), 2);
    for p in &pts {
        assert_eq!(rat(&p.x), Some(r(1, 2)));
        assert_eq!(p.y.ann(), &UniPoly::parse("4*x^2 - 3").unwrap());
        assert!(p.y.refine_prec(256).unwrap().residual_f64() < 1e-30);
    }
    assert_eq!(pts[0].y.real_sign().unwrap(), Some(Ordering::Less));
    assert_eq!(rat(&pts[0].dist2(&pts[1]).unwrap()), Some(r(3, 1)));
    let far = Circle { x0: n(3), y0: n(0), r: n(1) };
    assert!(intersect_circles(&unit_circle(), &far).unwrap().is_empty());
    let touching = Circle { x0: n(2), y0: n(0), r: n(1) };
    let pts = intersect_circles(&unit_circle(), &touching).unwrap();
    assert_eq!(pts.len(), 1);
    assert!(is_at(&pts[0], r(1, 1), r(0, 1)));
    let bigger = Circle { x0: n(0), y0: n(0), r: n(2) };
    assert_eq!(intersect_circles(&unit_circle(), &bigger), Err(EuclidError::ConcentricDistinct));
    assert_eq!(intersect_circles(&unit_circle(), &unit_circle()), Err(EuclidError::IdenticalCircles));
}

#[test]
fn parsing() {
    let s = parse_script("point A = (0, 0)").unwrap();
    assert_eq!(s.statements.len(), 1);
    assert_eq!(s.statements[0].kind, StmtKind::Point { name: "A".into(), x: r(0, 1), y: r(0, 1) });
    let s = parse_script("point A = (-1/2, 3) ; comment\n\n; only a comment\nline L = line(A, A)").unwrap();
    assert_eq!(s.statements.len(), 2);
    assert_eq!(s.statements[1].line, 4);
    let s = parse_script(
        "point A = (0,0)\npoint B = (1,0)\ncircle C = circle(A,B)\ncircle D = circle(B,A)\n\
         point P = meet(C, D) near(0.5, -0.8)\npoint Q = meet(C, D)",
    )
    .unwrap();
    assert_eq!(
        s.statements[4].kind,
        StmtKind::Meet {
            name: "P".into(),
            first: "C".into(),
            second: "D".into(),
            selector: Selector::Near(r(1, 2), r(-4, 5))
        }
    );
    assert!(matches!(&s.statements[5].kind, StmtKind::Meet { selector: Selector::Index(0), .. }));
    assert_eq!(parse_script("").unwrap().statements.len(), 0);
}

#[test]
fn parse_errors_carry_positions() {
    let e = parse_script("point A = (0, 0)\nline L = line(A, B)").unwrap_err();
    assert_eq!((e.line, e.column), (2, 18));
    assert_eq!(e.kind, ScriptErrorKind::UndefinedName("B".into()));
    let e = parse_script("point A = (0, 0)\npoint A = (1, 0)").unwrap_err();
    assert_eq!((e.line, e.column, e.kind), (2, 7, ScriptErrorKind::Redefinition("A".into())));
    let e = parse_script("point A = (0 0)").unwrap_err();
    assert_eq!((e.line, e.column), (1, 14));
    assert!(matches!(e.kind, ScriptErrorKind::Syntax(_)));
    let e =
        parse_script("point A = (0, 0)\npoint B = (1, 0)\nline L = line(A, B)\ncircle C = circle(L, A)").unwrap_err();
    assert!(matches!(e.kind, ScriptErrorKind::KindMismatch { .. }));
    let e = parse_script("point A = (0.5, 0)").unwrap_err();
    assert_eq!(e.column, 12);
    assert!(e.to_string().starts_with("line 1, column 12:"));
}

#[test]
fn execution_and_certificate() {
    let text =
        "point A = (0, 0)\npoint B = (1, 0)\ncircle C = circle(A, B)\ncircle D = circle(B, A)\npoint P = meet(C, D) #1";
    let s = parse_script(text).unwrap();
    let ex = execute_script(&s, 128).unwrap();
    let p = ex.point("P").unwrap();
    assert_eq!(rat(&p.x), Some(r(1, 2)));
    assert_eq!(p.y.ann(), &UniPoly::parse("4*x^2 - 3").unwrap());
    assert_eq!(p.y.real_sign().unwrap(), Some(Ordering::Greater));
    let cert = &ex.certificate;
    assert_eq!(cert.points.len(), 3);
    assert_eq!(cert.points[2].parents, vec!["C".to_string(), "D".to_string()]);
    let rep = verify_certificate(cert, Some(text));
    assert!(rep.passed(), "{rep:?}");
    let again = execute_script(&parse_script(text).unwrap(), 128).unwrap();
    assert_eq!(again.certificate.to_json(), cert.to_json());
    let back: Certificate = serde_json::from_str(&cert.to_json()).unwrap();
    assert_eq!(&back, cert);
    assert!(!verify_certificate(cert, Some("point A = (0, 0)")).passed());
}

#[test]
fn tampered_certificate_fails() {
    let text =
        "point A = (0, 0)\npoint B = (1, 0)\ncircle C = circle(A, B)\ncircle D = circle(B, A)\npoint P = meet(C, D) #1";
    let mut cert = execute_script(&parse_script(text).unwrap(), 128).unwrap().certificate;
    // a well-formed payload, but for a point on neither circle
    cert.points[2].x = AlgebraicNumber::from_rational(&r(1, 3)).to_payload().unwrap();
    let rep = verify_certificate(&cert, None);
    assert!(!rep.passed());
    assert!(rep.checks.contains(&("P.annihilators".to_string(), true)));
    assert!(rep.checks.contains(&("P.on_C".to_string(), false)));
    cert.points[2].x.approx_re = "0.25".into();
    assert!(!rep.checks.is_empty() && !verify_certificate(&cert, None).passed());
}

#[test]
fn execution_errors() {
    let s = parse_script("point A = (1, 1)\nline L = line(A, A)").unwrap();
    let e = execute_script(&s, 128).unwrap_err();
    assert_eq!((e.line, e.source.clone()), (2, EuclidError::CoincidentPoints));
    let s = parse_script(
        "point A = (0,0)\npoint B = (1,0)\npoint E = (5,0)\npoint F = (6,0)\ncircle C = circle(A,B)\ncircle D = circle(E,F)\npoint P = meet(C,D)",
    )
    .unwrap();
    assert_eq!(execute_script(&s, 128).unwrap_err().source, EuclidError::NoIntersection);
    let s = parse_script(
        "point A = (0,0)\npoint B = (1,0)\ncircle C = circle(A,B)\ncircle D = circle(B,A)\npoint P = meet(C,D) near(0.5, 0)",
    )
    .unwrap();
    assert_eq!(execute_script(&s, 128).unwrap_err().source, EuclidError::SelectorAmbiguous);
    let s = parse_script(
        "point A = (0,0)\npoint B = (1,0)\ncircle C = circle(A,B)\ncircle D = circle(B,A)\npoint P = meet(C,D) #2",
    )
    .unwrap();
    assert_eq!(execute_script(&s, 128).unwrap_err().source, EuclidError::SelectorOutOfRange { index: 2, count: 2 });
    let empty = execute_script(&parse_script("").unwrap(), 128).unwrap();
    assert!(empty.certificate.points.is_empty());
    assert!(verify_certificate(&empty.certificate, Some("")).passed());
}
