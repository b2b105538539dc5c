//! Compass-and-straightedge geometry over algebraic coordinates.
//!
//! Lines are `a x + b y = c` and circles `(x - x0)^2 + (y - y0)^2 = r^2`.
//! Every predicate that decides which branch a construction takes
//! (coincidence, parallelism, tangency) goes through the exact zero test of
//! [`AlgebraicNumber`].

mod cert;
mod script;

use std::cmp::Ordering;

use thiserror::Error;

use crate::algnum::{AlgError, AlgebraicNumber};
use crate::numeric::Rational;

pub use cert::{
    execute_script, verify_certificate, Certificate, Curve, CurveRecord, ExecError, Execution, PointRecord,
    VerifyReport,
};
pub use script::{hash_source, parse_script, Script, ScriptError, ScriptErrorKind, Selector, Statement, StmtKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EuclidError {
    #[error("the two points coincide")]
    CoincidentPoints,
    #[error("the lines are parallel or identical")]
    ParallelLines,
    #[error("the curves do not intersect")]
    NoIntersection,
    #[error("the circles are concentric with different radii")]
    ConcentricDistinct,
    #[error("the circles are identical")]
    IdenticalCircles,
    #[error("a coordinate left the real plane")]
    NonReal,
    #[error("the hint is equally close to several intersection points")]
    SelectorAmbiguous,
    #[error("intersection #{index} requested but only {count} exist")]
    SelectorOutOfRange { index: usize, count: usize },
    #[error(transparent)]
    Alg(#[from] AlgError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub x: AlgebraicNumber,
    pub y: AlgebraicNumber,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub a: AlgebraicNumber,
    pub b: AlgebraicNumber,
    pub c: AlgebraicNumber,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circle {
    pub x0: AlgebraicNumber,
    pub y0: AlgebraicNumber,
    pub r: AlgebraicNumber,
}

type Res<T> = Result<T, EuclidError>;

impl Point {
    pub fn new(x: AlgebraicNumber, y: AlgebraicNumber) -> Self {
        Point { x, y }
    }

    pub fn rational(x: &Rational, y: &Rational) -> Self {
        Point { x: AlgebraicNumber::from_rational(x), y: AlgebraicNumber::from_rational(y) }
    }

    pub fn from_i64(x: i64, y: i64) -> Self {
        Point { x: AlgebraicNumber::from_i64(x), y: AlgebraicNumber::from_i64(y) }
    }

    /// Exact equality of both coordinates.
    pub fn same_as(&self, other: &Point) -> Res<bool> {
        Ok(self.x.sub(&other.x)?.is_zero()? && self.y.sub(&other.y)?.is_zero()?)
    }

    /// Squared distance, exact.
    pub fn dist2(&self, other: &Point) -> Res<AlgebraicNumber> {
        let dx = other.x.sub(&self.x)?;
        let dy = other.y.sub(&self.y)?;
        Ok(dx.mul(&dx)?.add(&dy.mul(&dy)?)?)
    }

    /// Lexicographic order on `(x, y)`, decided exactly.
    pub fn cmp_lex(&self, other: &Point) -> Res<Ordering> {
        for (u, v) in [(&self.x, &other.x), (&self.y, &other.y)] {
            match u.cmp_real(v)? {
                None => return Err(EuclidError::NonReal),
                Some(Ordering::Equal) => continue,
                Some(o) => return Ok(o),
            }
        }
        Ok(Ordering::Equal)
    }
}

impl Line {
    /// `a x + b y - c` at `p`.
    pub fn residual(&self, p: &Point) -> Res<AlgebraicNumber> {
        Ok(self.a.mul(&p.x)?.add(&self.b.mul(&p.y)?)?.sub(&self.c)?)
    }
}

impl Circle {
    /// `(x - x0)^2 + (y - y0)^2 - r^2` at `p`.
    pub fn residual(&self, p: &Point) -> Res<AlgebraicNumber> {
        let center = Point::new(self.x0.clone(), self.y0.clone());
        Ok(center.dist2(p)?.sub(&self.r.mul(&self.r)?)?)
    }

    pub fn center(&self) -> Point {
        Point::new(self.x0.clone(), self.y0.clone())
    }
}

pub fn line_through(p: &Point, q: &Point) -> Res<Line> {
    if p.same_as(q)? {
        return Err(EuclidError::CoincidentPoints);
    }
    let a = p.y.sub(&q.y)?;
    let b = q.x.sub(&p.x)?;
    let c = q.x.mul(&p.y)?.sub(&p.x.mul(&q.y)?)?;
    Ok(Line { a, b, c })
}

pub fn circle_around_through(m: &Point, p: &Point) -> Res<Circle> {
    if m.same_as(p)? {
        return Err(EuclidError::CoincidentPoints);
    }
    let r = m.dist2(p)?.sqrt()?;
    Ok(Circle { x0: m.x.clone(), y0: m.y.clone(), r })
}

pub fn intersect_lines(l1: &Line, l2: &Line) -> Res<Point> {
    let det = l1.a.mul(&l2.b)?.sub(&l2.a.mul(&l1.b)?)?;
    if det.is_zero()? {
        return Err(EuclidError::ParallelLines);
    }
    let x = l1.c.mul(&l2.b)?.sub(&l2.c.mul(&l1.b)?)?.div(&det)?;
    let y = l1.a.mul(&l2.c)?.sub(&l2.a.mul(&l1.c)?)?.div(&det)?;
    Ok(Point::new(x, y))
}

/// Intersection points sorted by `(x, y)`: none, one for a tangent, or two.
pub fn intersect_line_circle(l: &Line, c: &Circle) -> Res<Vec<Point>> {
    // shift the circle to the origin: a u + b v = d, u^2 + v^2 = r^2
    let d = l.c.sub(&l.a.mul(&c.x0)?)?.sub(&l.b.mul(&c.y0)?)?;
    // eliminate whichever of u, v has a nonzero coefficient in the line
    let b_zero = l.b.is_zero()?;
    let (p, q) = if b_zero { (&l.b, &l.a) } else { (&l.a, &l.b) };
    // q w + p t = d with t the eliminated variable's partner
    let alpha = l.a.mul(&l.a)?.add(&l.b.mul(&l.b)?)?;
    let two = AlgebraicNumber::from_i64(2);
    let beta = two.mul(p)?.mul(&d)?.neg();
    let gamma = d.mul(&d)?.sub(&q.mul(q)?.mul(&c.r.mul(&c.r)?)?)?;
    let four = AlgebraicNumber::from_i64(4);
    let disc = beta.mul(&beta)?.sub(&four.mul(&alpha)?.mul(&gamma)?)?;
    let two_alpha = two.mul(&alpha)?;
    let roots = if disc.is_zero()? {
        vec![beta.neg().div(&two_alpha)?]
    } else {
        match disc.real_sign()? {
            None => return Err(EuclidError::NonReal),
            Some(Ordering::Less) => return Ok(Vec::new()),
            _ => {
                let s = disc.sqrt()?;
                vec![beta.neg().sub(&s)?.div(&two_alpha)?, beta.neg().add(&s)?.div(&two_alpha)?]
            }
        }
    };
    let mut out = Vec::with_capacity(roots.len());
    for t in roots {
        // the partner coordinate from the line equation
        let w = d.sub(&p.mul(&t)?)?.div(q)?;
        let (u, v) = if b_zero { (w, t) } else { (t, w) };
        out.push(Point::new(u.add(&c.x0)?, v.add(&c.y0)?));
    }
    sort_points(out)
}

pub fn intersect_circles(c1: &Circle, c2: &Circle) -> Res<Vec<Point>> {
    let two = AlgebraicNumber::from_i64(2);
    let a = two.mul(&c2.x0.sub(&c1.x0)?)?;
    let b = two.mul(&c2.y0.sub(&c1.y0)?)?;
    let sq = |v: &AlgebraicNumber| v.mul(v);
    let c = sq(&c1.r)?.sub(&sq(&c2.r)?)?.sub(&sq(&c1.x0)?)?.add(&sq(&c2.x0)?)?.sub(&sq(&c1.y0)?)?.add(&sq(&c2.y0)?)?;
    if a.is_zero()? && b.is_zero()? {
        return Err(if c.is_zero()? { EuclidError::IdenticalCircles } else { EuclidError::ConcentricDistinct });
    }
    intersect_line_circle(&Line { a, b, c }, c1)
}

fn sort_points(mut pts: Vec<Point>) -> Res<Vec<Point>> {
    if pts.len() == 2 && pts[0].cmp_lex(&pts[1])? == Ordering::Greater {
        pts.swap(0, 1);
    }
    Ok(pts)
}

#[cfg(test)]
mod tests;
