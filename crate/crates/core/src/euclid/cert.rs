//! Script execution and certificates.

use std::collections::HashMap;

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::script::{hash_source, Script, Selector, StmtKind};
use super::{
    circle_around_through, intersect_circles, intersect_line_circle, intersect_lines, line_through, Circle,
    EuclidError, Line, Point,
};
use crate::algnum::{verify_payload, AlgPayload, AlgebraicNumber};
use crate::numeric::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    pub name: String,
    pub x: AlgPayload,
    pub y: AlgPayload,
    /// `given` or `meet`.
    pub op: String,
    pub parents: Vec<String>,
    /// Position among the sorted intersection points, for `meet`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choice: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub name: String,
    /// `line` (through both parents) or `circle` (around the first, through
    /// the second).
    pub kind: String,
    pub parents: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub script_hash: String,
    pub prec_bits: u32,
    pub curves: Vec<CurveRecord>,
    pub points: Vec<PointRecord>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

#[derive(Clone, Debug)]
pub enum Curve {
    Line(Line),
    Circle(Circle),
}

/// Result of running a script: all named objects plus the certificate.
#[derive(Clone, Debug)]
pub struct Execution {
    pub points: Vec<(String, Point)>,
    pub curves: HashMap<String, Curve>,
    pub certificate: Certificate,
}

impl Execution {
    pub fn point(&self, name: &str) -> Option<&Point> {
        self.points.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column} (`{name}`): {source}")]
pub struct ExecError {
    pub line: usize,
    pub column: usize,
    pub name: String,
    pub source: EuclidError,
}

fn meet(a: &Curve, b: &Curve) -> Result<Vec<Point>, EuclidError> {
    match (a, b) {
        (Curve::Line(l1), Curve::Line(l2)) => Ok(vec![intersect_lines(l1, l2)?]),
        (Curve::Line(l), Curve::Circle(c)) | (Curve::Circle(c), Curve::Line(l)) => intersect_line_circle(l, c),
        (Curve::Circle(c1), Curve::Circle(c2)) => intersect_circles(c1, c2),
    }
}

fn select(cands: Vec<Point>, sel: &Selector, prec: u32) -> Result<(usize, Point), EuclidError> {
    if cands.is_empty() {
        return Err(EuclidError::NoIntersection);
    }
    let idx = match sel {
        Selector::Index(i) => {
            if *i >= cands.len() {
                return Err(EuclidError::SelectorOutOfRange { index: *i, count: cands.len() });
            }
            *i
        }
        Selector::Near(hx, hy) => {
            let mut d = Vec::with_capacity(cands.len());
            for p in &cands {
                let x = p.x.approx_at(prec)?.re().to_rational();
                let y = p.y.approx_at(prec)?.re().to_rational();
                d.push((&x - hx) * (&x - hx) + (&y - hy) * (&y - hy));
            }
            let best = (0..d.len()).min_by(|&i, &j| d[i].cmp(&d[j])).expect("nonempty");
            let tol = Rational::new(One::one(), num_bigint::BigInt::one() << (prec / 2));
            if (0..d.len()).any(|j| j != best && &d[j] - &d[best] <= tol) {
                return Err(EuclidError::SelectorAmbiguous);
            }
            best
        }
    };
    Ok((idx, cands.into_iter().nth(idx).expect("index checked")))
}

/// Runs every statement in order and records each point in a certificate
/// whose coordinates are refined to `prec` bits.
pub fn execute_script(script: &Script, prec: u32) -> Result<Execution, ExecError> {
    let mut points: Vec<(String, Point)> = Vec::new();
    let mut by_name: HashMap<String, usize> = HashMap::new();
    let mut curves: HashMap<String, Curve> = HashMap::new();
    let mut cert = Certificate {
        script_hash: script.source_hash.clone(),
        prec_bits: prec,
        curves: Vec::new(),
        points: Vec::new(),
    };
    for st in &script.statements {
        let at =
            |source: EuclidError| ExecError { line: st.line, column: st.column, name: st.name().to_string(), source };
        let pt = |n: &str| &points[by_name[n]].1;
        match &st.kind {
            StmtKind::Point { name, x, y } => {
                let p = Point::rational(x, y);
                let rec = record(name, &p, "given", vec![], None, prec).map_err(at)?;
                cert.points.push(rec);
                by_name.insert(name.clone(), points.len());
                points.push((name.clone(), p));
            }
            StmtKind::Line { name, p, q } => {
                let l = line_through(pt(p), pt(q)).map_err(at)?;
                cert.curves.push(CurveRecord {
                    name: name.clone(),
                    kind: "line".into(),
                    parents: vec![p.clone(), q.clone()],
                });
                curves.insert(name.clone(), Curve::Line(l));
            }
            StmtKind::Circle { name, center, through } => {
                let c = circle_around_through(pt(center), pt(through)).map_err(at)?;
                cert.curves.push(CurveRecord {
                    name: name.clone(),
                    kind: "circle".into(),
                    parents: vec![center.clone(), through.clone()],
                });
                curves.insert(name.clone(), Curve::Circle(c));
            }
            StmtKind::Meet { name, first, second, selector } => {
                let cands = meet(&curves[first], &curves[second]).map_err(at)?;
                let (idx, p) = select(cands, selector, prec).map_err(at)?;
                let rec = record(name, &p, "meet", vec![first.clone(), second.clone()], Some(idx), prec).map_err(at)?;
                cert.points.push(rec);
                by_name.insert(name.clone(), points.len());
                points.push((name.clone(), p));
            }
        }
    }
    Ok(Execution { points, curves, certificate: cert })
}

fn record(
    name: &str,
    p: &Point,
    op: &str,
    parents: Vec<String>,
    choice: Option<usize>,
    prec: u32,
) -> Result<PointRecord, EuclidError> {
    Ok(PointRecord {
        name: name.to_string(),
        x: p.x.refine_prec(prec)?.to_payload()?,
        y: p.y.refine_prec(prec)?.to_payload()?,
        op: op.to_string(),
        parents,
        choice,
    })
}

/// Named pass/fail results of checking a certificate.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<(String, bool)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    fn push(&mut self, name: String, ok: bool) {
        self.checks.push((name, ok));
    }
}

/// Re-checks a certificate from scratch:
///
/// - each coordinate's annihilator has a root within the declared error of
///   its decimal center (exact rational test);
/// - given points are rational;
/// - every intersection point lies exactly on both parent curves, with the
///   curves rebuilt from their parent points;
/// - with `script`, the script hash matches.
pub fn verify_certificate(cert: &Certificate, script: Option<&str>) -> VerifyReport {
    let mut rep = VerifyReport::default();
    if let Some(text) = script {
        rep.push("script_hash".into(), hash_source(text) == cert.script_hash);
    }
    let mut points: HashMap<&str, Point> = HashMap::new();
    let mut curves: HashMap<&str, Curve> = HashMap::new();
    let curve_recs: HashMap<&str, &CurveRecord> = cert.curves.iter().map(|c| (c.name.as_str(), c)).collect();
    for pr in &cert.points {
        let tag = |what: &str| format!("{}.{}", pr.name, what);
        let payload_ok = [&pr.x, &pr.y].iter().all(|p| verify_payload(p).unwrap_or(false));
        rep.push(tag("annihilators"), payload_ok);
        if !payload_ok {
            continue;
        }
        let coords =
            AlgebraicNumber::from_payload(&pr.x).and_then(|x| Ok(Point::new(x, AlgebraicNumber::from_payload(&pr.y)?)));
        let Ok(p) = coords else {
            rep.push(tag("identified"), false);
            continue;
        };
        match pr.op.as_str() {
            "given" => rep.push(tag("rational"), p.x.as_rational().is_some() && p.y.as_rational().is_some()),
            "meet" => {
                for parent in &pr.parents {
                    let ok = build_curve(parent, &curve_recs, &points, &mut curves)
                        .and_then(|c| on_curve(c, &p))
                        .unwrap_or(false);
                    rep.push(tag(&format!("on_{parent}")), ok);
                }
            }
            other => rep.push(tag(&format!("unknown op {other}")), false),
        }
        points.insert(pr.name.as_str(), p);
    }
    rep
}

fn build_curve<'a, 'c>(
    name: &str,
    recs: &HashMap<&'c str, &'c CurveRecord>,
    points: &HashMap<&str, Point>,
    built: &'a mut HashMap<&'c str, Curve>,
) -> Option<&'a Curve> {
    let rec = *recs.get(name)?;
    if !built.contains_key(rec.name.as_str()) {
        let [p, q] = rec.parents.as_slice() else { return None };
        let (p, q) = (points.get(p.as_str())?, points.get(q.as_str())?);
        let c = match rec.kind.as_str() {
            "line" => Curve::Line(line_through(p, q).ok()?),
            "circle" => Curve::Circle(circle_around_through(p, q).ok()?),
            _ => return None,
        };
        built.insert(rec.name.as_str(), c);
    }
    built.get(name)
}

fn on_curve(c: &Curve, p: &Point) -> Option<bool> {
    let r = match c {
        Curve::Line(l) => l.residual(p),
        Curve::Circle(c) => c.residual(p),
    };
    r.ok()?.is_zero().ok()
}
