//! Planar primitives and predicates, generic over the scalar type.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{Float, FloatConst, FromPrimitive};

use crate::error::{Error, Result};

/// Scalar type the whole crate is generic over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + fmt::Debug + fmt::Display + Default + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for pulling an `f64` literal into the generic scalar.
#[inline]
pub(crate) fn cast<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("literal must be representable")
}

/// A point of the plane, in paper units.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2<R> {
    pub x: R,
    pub y: R,
}

/// A displacement of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2<R> {
    pub x: R,
    pub y: R,
}

impl<R: Real> Point2<R> {
    pub fn new(x: R, y: R) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn to_vec(self) -> Vec2<R> {
        Vec2 { x: self.x, y: self.y }
    }

    pub fn distance(self, other: Point2<R>) -> R {
        (other - self).norm()
    }

    pub fn midpoint(self, other: Point2<R>) -> Point2<R> {
        Point2::new((self.x + other.x) / cast(2.0), (self.y + other.y) / cast(2.0))
    }
}

impl<R: Real> Vec2<R> {
    pub fn new(x: R, y: R) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, other: Vec2<R>) -> R {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product.
    pub fn cross(self, other: Vec2<R>) -> R {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> R {
        self.dot(self).sqrt()
    }

    pub fn norm_squared(self) -> R {
        self.dot(self)
    }

    pub fn normalized(self) -> Vec2<R> {
        let n = self.norm();
        Vec2::new(self.x / n, self.y / n)
    }

    /// Counterclockwise perpendicular.
    pub fn perp(self) -> Vec2<R> {
        Vec2::new(-self.y, self.x)
    }

    pub fn angle(self) -> R {
        self.y.atan2(self.x)
    }
}

impl<R: Real> Add<Vec2<R>> for Point2<R> {
    type Output = Point2<R>;
    fn add(self, v: Vec2<R>) -> Point2<R> {
        Point2::new(self.x + v.x, self.y + v.y)
    }
}

impl<R: Real> Sub<Vec2<R>> for Point2<R> {
    type Output = Point2<R>;
    fn sub(self, v: Vec2<R>) -> Point2<R> {
        Point2::new(self.x - v.x, self.y - v.y)
    }
}

impl<R: Real> Sub for Point2<R> {
    type Output = Vec2<R>;
    fn sub(self, other: Point2<R>) -> Vec2<R> {
        Vec2::new(self.x - other.x, self.y - other.y)
    }
}

impl<R: Real> Add for Vec2<R> {
    type Output = Vec2<R>;
    fn add(self, o: Vec2<R>) -> Vec2<R> {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl<R: Real> Sub for Vec2<R> {
    type Output = Vec2<R>;
    fn sub(self, o: Vec2<R>) -> Vec2<R> {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl<R: Real> Mul<R> for Vec2<R> {
    type Output = Vec2<R>;
    fn mul(self, s: R) -> Vec2<R> {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl<R: Real> Div<R> for Vec2<R> {
    type Output = Vec2<R>;
    fn div(self, s: R) -> Vec2<R> {
        Vec2::new(self.x / s, self.y / s)
    }
}

impl<R: Real> Neg for Vec2<R> {
    type Output = Vec2<R>;
    fn neg(self) -> Vec2<R> {
        Vec2::new(-self.x, -self.y)
    }
}

/// A closed segment with distinct endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment2<R> {
    pub a: Point2<R>,
    pub b: Point2<R>,
}

impl<R: Real> Segment2<R> {
    pub fn new(a: Point2<R>, b: Point2<R>) -> Self {
        Segment2 { a, b }
    }

    pub fn length(&self) -> R {
        self.a.distance(self.b)
    }

    pub fn direction(&self) -> Vec2<R> {
        (self.b - self.a).normalized()
    }

    pub fn midpoint(&self) -> Point2<R> {
        self.a.midpoint(self.b)
    }

    /// Squared distance from `p` to the segment.
    pub fn distance_squared_to(&self, p: Point2<R>) -> R {
        let d = self.b - self.a;
        let len2 = d.norm_squared();
        if len2 == R::zero() {
            return (p - self.a).norm_squared();
        }
        let t = ((p - self.a).dot(d) / len2).max(R::zero()).min(R::one());
        let proj = self.a + d * t;
        (p - proj).norm_squared()
    }

    pub fn distance_to(&self, p: Point2<R>) -> R {
        self.distance_squared_to(p).sqrt()
    }
}

/// An oriented line in normal form: points `p` with `p · normal = offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line2<R> {
    pub normal: Vec2<R>,
    pub offset: R,
}

impl<R: Real> Line2<R> {
    /// Line through `p` with direction `dir` (unit not required).
    pub fn through(p: Point2<R>, dir: Vec2<R>) -> Self {
        let normal = dir.perp().normalized();
        Line2 { normal, offset: normal.dot(p.to_vec()) }
    }

    pub fn from_segment(s: &Segment2<R>) -> Self {
        Line2::through(s.a, s.b - s.a)
    }

    /// Signed distance, positive on the side the normal points to.
    pub fn signed_distance(&self, p: Point2<R>) -> R {
        self.normal.dot(p.to_vec()) - self.offset
    }

    pub fn direction(&self) -> Vec2<R> {
        Vec2::new(self.normal.y, -self.normal.x)
    }

    /// Intersection of two lines; `None` when parallel.
    pub fn intersect(&self, other: &Line2<R>) -> Option<Point2<R>> {
        let det = self.normal.cross(other.normal);
        if det.abs() < cast(1e-14) {
            return None;
        }
        // Solve normal1 . p = c1, normal2 . p = c2 (note cross order).
        let x = (self.offset * other.normal.y - other.offset * self.normal.y) / det;
        let y = (other.offset * self.normal.x - self.offset * other.normal.x) / det;
        Some(Point2::new(x, y))
    }

    /// Reflection of a point across the line.
    pub fn reflect_point(&self, p: Point2<R>) -> Point2<R> {
        let d = self.signed_distance(p);
        p - self.normal * (d + d)
    }

    /// Reflection of a direction across the line.
    pub fn reflect_vec(&self, v: Vec2<R>) -> Vec2<R> {
        let d = self.normal.dot(v);
        v - self.normal * (d + d)
    }
}

/// Axis-aligned rectangle, used for the paper sheet and clip windows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect<R> {
    pub min: Point2<R>,
    pub max: Point2<R>,
}

impl<R: Real> Rect<R> {
    pub fn new(min: Point2<R>, max: Point2<R>) -> Self {
        Rect { min, max }
    }

    pub fn width(&self) -> R {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> R {
        self.max.y - self.min.y
    }

    pub fn diagonal(&self) -> R {
        self.min.distance(self.max)
    }

    pub fn contains(&self, p: Point2<R>, slack: R) -> bool {
        p.x >= self.min.x - slack
            && p.x <= self.max.x + slack
            && p.y >= self.min.y - slack
            && p.y <= self.max.y + slack
    }

    pub fn inflate(&self, m: R) -> Rect<R> {
        Rect::new(
            Point2::new(self.min.x - m, self.min.y - m),
            Point2::new(self.max.x + m, self.max.y + m),
        )
    }

    pub fn corners(&self) -> [Point2<R>; 4] {
        [
            self.min,
            Point2::new(self.max.x, self.min.y),
            self.max,
            Point2::new(self.min.x, self.max.y),
        ]
    }

    pub fn edges(&self) -> [Segment2<R>; 4] {
        let c = self.corners();
        [
            Segment2::new(c[0], c[1]),
            Segment2::new(c[1], c[2]),
            Segment2::new(c[2], c[3]),
            Segment2::new(c[3], c[0]),
        ]
    }

    /// Bounding rectangle of a point set.
    pub fn bounding(points: impl IntoIterator<Item = Point2<R>>) -> Option<Rect<R>> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut r = Rect::new(first, first);
        for p in it {
            r.min.x = r.min.x.min(p.x);
            r.min.y = r.min.y.min(p.y);
            r.max.x = r.max.x.max(p.x);
            r.max.y = r.max.y.max(p.y);
        }
        Some(r)
    }

    /// Clip a segment to the rectangle; `None` if fully outside.
    pub fn clip_segment(&self, s: &Segment2<R>) -> Option<Segment2<R>> {
        // Liang-Barsky.
        let d = s.b - s.a;
        let mut t0 = R::zero();
        let mut t1 = R::one();
        let checks = [
            (-d.x, s.a.x - self.min.x),
            (d.x, self.max.x - s.a.x),
            (-d.y, s.a.y - self.min.y),
            (d.y, self.max.y - s.a.y),
        ];
        for (p, q) in checks {
            if p.abs() < cast(1e-30) {
                if q < R::zero() {
                    return None;
                }
            } else {
                let r = q / p;
                if p < R::zero() {
                    if r > t1 {
                        return None;
                    }
                    t0 = t0.max(r);
                } else {
                    if r < t0 {
                        return None;
                    }
                    t1 = t1.min(r);
                }
            }
        }
        if t0 >= t1 {
            return None;
        }
        Some(Segment2::new(s.a + d * t0, s.a + d * t1))
    }
}

/// Coincidence and verification thresholds, fixed once per drawing.
///
/// Both are stored as absolute lengths derived from the drawing diameter, so
/// every downstream comparison is scale invariant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<R> {
    /// Drawing diameter the thresholds were derived from.
    pub diameter: R,
    /// Coincidence threshold; points closer than this are the same point.
    pub eps_geom: R,
    /// Verification threshold for alignment and equidistance checks.
    pub eps_verify: R,
}

impl<R: Real> Tolerance<R> {
    pub const REL_GEOM: f64 = 1e-9;
    pub const REL_VERIFY: f64 = 1e-6;

    pub fn from_diameter(diameter: R) -> Self {
        Tolerance {
            diameter,
            eps_geom: diameter * cast(Self::REL_GEOM),
            eps_verify: diameter * cast(Self::REL_VERIFY),
        }
    }

    pub fn checked(diameter: R, rel_geom: R, rel_verify: R) -> Result<Self> {
        if !(rel_geom > R::zero() && rel_geom < rel_verify && rel_verify < R::one()) {
            return Err(Error::InvalidInput(format!(
                "tolerances must satisfy 0 < eps_geom < eps_verify < 1, got {rel_geom} and {rel_verify}"
            )));
        }
        Ok(Tolerance {
            diameter,
            eps_geom: diameter * rel_geom,
            eps_verify: diameter * rel_verify,
        })
    }
}

/// Velocity of a wavefront vertex between two unit-speed fronts.
///
/// Fronts move along their inward unit normals; the vertex stays on both
/// moving lines. Nearly parallel fronts (angle within ~1e-9) degenerate:
/// same direction gives a unit-speed straight vertex, opposite directions a
/// pinch that must be resolved structurally.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrontVelocity<R> {
    Normal(Vec2<R>),
    Straight(Vec2<R>),
    Pinch,
}

pub fn front_velocity<R: Real>(n_in: Vec2<R>, n_out: Vec2<R>) -> FrontVelocity<R> {
    let det = n_in.cross(n_out);
    if det.abs() < cast(1e-9) {
        if n_in.dot(n_out) > R::zero() {
            return FrontVelocity::Straight((n_in + n_out).normalized());
        }
        return FrontVelocity::Pinch;
    }
    let vx = (n_out.y - n_in.y) / det;
    let vy = (n_in.x - n_out.x) / det;
    FrontVelocity::Normal(Vec2::new(vx, vy))
}

/// Classification of a segment pair intersection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentIntersection<R> {
    Empty,
    Point(Point2<R>),
    Overlap(Segment2<R>),
}

/// Exact-as-possible intersection of two segments, symmetric in its
/// arguments. Point results lie within `eps_geom` of both segments.
pub fn intersect_segments<R: Real>(
    s1: &Segment2<R>,
    s2: &Segment2<R>,
    tol: &Tolerance<R>,
) -> SegmentIntersection<R> {
    let eps = tol.eps_geom;
    let d1 = s1.b - s1.a;
    let d2 = s2.b - s2.a;
    let denom = d1.cross(d2);
    let w = s2.a - s1.a;

    let len1 = d1.norm();
    let len2 = d2.norm();
    // Parallel when the angle between directions is below the relative
    // coincidence threshold.
    let sin_eps = tol.eps_geom / tol.diameter.max(tol.eps_geom);
    if denom.abs() <= sin_eps * len1 * len2 {
        // Collinear if s2.a is on s1's line.
        let dist = w.cross(d1).abs() / len1;
        if dist > eps {
            return SegmentIntersection::Empty;
        }
        // Project both onto d1 and intersect parameter intervals.
        let t_of = |p: Point2<R>| (p - s1.a).dot(d1) / (len1 * len1);
        let (mut u0, mut u1) = (t_of(s2.a), t_of(s2.b));
        if u0 > u1 {
            std::mem::swap(&mut u0, &mut u1);
        }
        let lo = u0.max(R::zero());
        let hi = u1.min(R::one());
        let eps_t = eps / len1;
        if hi < lo - eps_t {
            return SegmentIntersection::Empty;
        }
        let pa = s1.a + d1 * lo.max(R::zero());
        let pb = s1.a + d1 * hi.min(R::one());
        if pa.distance(pb) <= eps {
            return SegmentIntersection::Point(pa.midpoint(pb));
        }
        return SegmentIntersection::Overlap(Segment2::new(pa, pb));
    }

    let t = w.cross(d2) / denom;
    let u = w.cross(d1) / denom;
    let eps_t = eps / len1;
    let eps_u = eps / len2;
    if t < -eps_t || t > R::one() + eps_t || u < -eps_u || u > R::one() + eps_u {
        return SegmentIntersection::Empty;
    }
    let t = t.max(R::zero()).min(R::one());
    SegmentIntersection::Point(s1.a + d1 * t)
}

/// Even-odd point/polygon classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointLocation {
    Inside,
    Boundary,
    Outside,
}

/// Standard even-odd test; points within `eps_geom` of an edge report
/// `Boundary`. The cycle must be simple.
pub fn point_in_polygon<R: Real>(
    p: Point2<R>,
    poly: &[Point2<R>],
    tol: &Tolerance<R>,
) -> Result<PointLocation> {
    if poly.len() < 3 {
        return Err(Error::InvalidPolygon(format!("cycle has {} vertices", poly.len())));
    }
    if !is_simple_cycle(poly, tol) {
        return Err(Error::InvalidPolygon("cycle is self-intersecting".into()));
    }
    Ok(point_in_cycle_unchecked(p, poly, tol.eps_geom))
}

/// Even-odd test without the simplicity check (hot path for verified data).
pub fn point_in_cycle_unchecked<R: Real>(
    p: Point2<R>,
    poly: &[Point2<R>],
    eps: R,
) -> PointLocation {
    let n = poly.len();
    for i in 0..n {
        let s = Segment2::new(poly[i], poly[(i + 1) % n]);
        if s.distance_to(p) <= eps {
            return PointLocation::Boundary;
        }
    }
    let mut inside = false;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            let x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x_cross {
                inside = !inside;
            }
        }
    }
    if inside {
        PointLocation::Inside
    } else {
        PointLocation::Outside
    }
}

/// Winding number of a closed cycle around `p` (no boundary handling).
pub fn winding_number<R: Real>(p: Point2<R>, poly: &[Point2<R>]) -> i32 {
    let n = poly.len();
    let mut w = 0i32;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if a.y <= p.y {
            if b.y > p.y && (b - a).cross(p - a) > R::zero() {
                w += 1;
            }
        } else if b.y <= p.y && (b - a).cross(p - a) < R::zero() {
            w -= 1;
        }
    }
    w
}

/// Signed area (positive for counterclockwise cycles).
pub fn signed_area<R: Real>(poly: &[Point2<R>]) -> R {
    let n = poly.len();
    let mut acc = R::zero();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        acc = acc + a.x * b.y - b.x * a.y;
    }
    acc / cast(2.0)
}

/// True when no two non-adjacent edges intersect and no vertex repeats.
pub fn is_simple_cycle<R: Real>(poly: &[Point2<R>], tol: &Tolerance<R>) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if poly[i].distance(poly[j]) <= tol.eps_geom {
                return false;
            }
        }
    }
    for i in 0..n {
        let si = Segment2::new(poly[i], poly[(i + 1) % n]);
        for j in (i + 1)..n {
            let adjacent = j == (i + 1) % n || (j + 1) % n == i || (i == 0 && j == n - 1);
            let sj = Segment2::new(poly[j], poly[(j + 1) % n]);
            match intersect_segments(&si, &sj, tol) {
                SegmentIntersection::Empty => {}
                SegmentIntersection::Point(p) => {
                    if !adjacent {
                        return false;
                    }
                    // Adjacent edges may only meet at the shared vertex.
                    let shared = if j == (i + 1) % n { poly[j] } else { poly[i] };
                    if p.distance(shared) > tol.eps_geom {
                        return false;
                    }
                }
                SegmentIntersection::Overlap(_) => return false,
            }
        }
    }
    true
}

/// Convex hull (Andrew's monotone chain), counterclockwise, no duplicates.
pub fn convex_hull<R: Real>(points: &[Point2<R>]) -> Vec<Point2<R>> {
    let mut pts: Vec<Point2<R>> = points.to_vec();
    pts.sort_by(|a, b| {
        a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap())
    });
    pts.dedup_by(|a, b| a == b);
    let n = pts.len();
    if n < 3 {
        return pts;
    }
    let chain = |iter: &mut dyn Iterator<Item = Point2<R>>| {
        let mut out: Vec<Point2<R>> = Vec::new();
        for p in iter {
            while out.len() >= 2 {
                let q = out[out.len() - 1];
                let r = out[out.len() - 2];
                if (q - r).cross(p - r) <= R::zero() {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(p);
        }
        out
    };
    let mut lower = chain(&mut pts.iter().copied());
    let mut upper = chain(&mut pts.iter().rev().copied());
    lower.pop();
    upper.pop();
    lower.append(&mut upper);
    lower
}

/// True when the cycle is convex (all turns one sign within `eps`).
pub fn is_convex_cycle<R: Real>(poly: &[Point2<R>], eps: R) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let mut sign = R::zero();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let c = poly[(i + 2) % n];
        let cr = (b - a).cross(c - b);
        if cr.abs() <= eps {
            continue;
        }
        if sign == R::zero() {
            sign = cr.signum();
        } else if cr.signum() != sign {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Point2<f64>;

    fn tol() -> Tolerance<f64> {
        Tolerance::from_diameter(2.0)
    }

    fn pt(x: f64, y: f64) -> P {
        Point2::new(x, y)
    }

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment2<f64> {
        Segment2::new(pt(ax, ay), pt(bx, by))
    }

    fn unit_square() -> Vec<P> {
        vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)]
    }

    #[test]
    fn parallel_disjoint_segments_are_empty() {
        let r = intersect_segments(&seg(0.0, 0.0, 1.0, 0.0), &seg(0.0, 1.0, 1.0, 1.0), &tol());
        assert_eq!(r, SegmentIntersection::Empty);
    }

    #[test]
    fn crossing_diagonals_meet_at_center() {
        let r = intersect_segments(&seg(0.0, 0.0, 2.0, 2.0), &seg(0.0, 2.0, 2.0, 0.0), &tol());
        match r {
            SegmentIntersection::Point(p) => {
                assert!(p.distance(pt(1.0, 1.0)) < 1e-12);
            }
            other => panic!("expected point, got {other:?}"),
        }
    }

    #[test]
    fn collinear_segments_overlap() {
        let r = intersect_segments(&seg(0.0, 0.0, 2.0, 0.0), &seg(1.0, 0.0, 3.0, 0.0), &tol());
        match r {
            SegmentIntersection::Overlap(s) => {
                assert!(s.a.distance(pt(1.0, 0.0)) < 1e-12);
                assert!(s.b.distance(pt(2.0, 0.0)) < 1e-12);
            }
            other => panic!("expected overlap, got {other:?}"),
        }
    }

    #[test]
    fn intersection_is_symmetric_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let t = tol();
        for _ in 0..500 {
            let mut p = || pt(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let s1 = Segment2::new(p(), p());
            let s2 = Segment2::new(p(), p());
            if s1.length() < 1e-6 || s2.length() < 1e-6 {
                continue;
            }
            let r12 = intersect_segments(&s1, &s2, &t);
            let r21 = intersect_segments(&s2, &s1, &t);
            match (r12, r21) {
                (SegmentIntersection::Empty, SegmentIntersection::Empty) => {}
                (SegmentIntersection::Point(a), SegmentIntersection::Point(b)) => {
                    assert!(a.distance(b) < 1e-9, "{a:?} vs {b:?}");
                }
                (SegmentIntersection::Overlap(a), SegmentIntersection::Overlap(b)) => {
                    let same = (a.a.distance(b.a) < 1e-9 && a.b.distance(b.b) < 1e-9)
                        || (a.a.distance(b.b) < 1e-9 && a.b.distance(b.a) < 1e-9);
                    assert!(same);
                }
                other => panic!("asymmetric classification {other:?}"),
            }
        }
    }

    #[test]
    fn point_in_unit_square() {
        let sq = unit_square();
        let t = tol();
        assert_eq!(point_in_polygon(pt(0.5, 0.5), &sq, &t).unwrap(), PointLocation::Inside);
        assert_eq!(point_in_polygon(pt(1.0, 0.5), &sq, &t).unwrap(), PointLocation::Boundary);
        assert_eq!(point_in_polygon(pt(2.0, 2.0), &sq, &t).unwrap(), PointLocation::Outside);
    }

    #[test]
    fn non_simple_cycle_is_rejected() {
        let bow = vec![pt(0.0, 0.0), pt(1.0, 1.0), pt(1.0, 0.0), pt(0.0, 1.0)];
        assert!(matches!(
            point_in_polygon(pt(0.2, 0.5), &bow, &tol()),
            Err(Error::InvalidPolygon(_))
        ));
    }

    #[test]
    fn even_odd_agrees_with_winding_on_random_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        // L-shaped hexagon keeps the test honest on a nonconvex cycle.
        let l = vec![
            pt(0.0, 0.0), pt(2.0, 0.0), pt(2.0, 1.0), pt(1.0, 1.0), pt(1.0, 2.0), pt(0.0, 2.0),
        ];
        let t = Tolerance::from_diameter(3.0);
        for _ in 0..1000 {
            let p = pt(rng.gen_range(-0.5..2.5), rng.gen_range(-0.5..2.5));
            let loc = point_in_cycle_unchecked(p, &l, t.eps_geom);
            if loc == PointLocation::Boundary {
                continue;
            }
            let w = winding_number(p, &l);
            assert_eq!(loc == PointLocation::Inside, w != 0, "at {p:?}");
        }
    }

    #[test]
    fn hull_and_convexity() {
        let pts = vec![pt(0.0, 0.0), pt(2.0, 0.0), pt(1.0, 0.5), pt(2.0, 2.0), pt(0.0, 2.0)];
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 4);
        assert!(is_convex_cycle(&hull, 1e-12));
        assert!(signed_area(&hull) > 0.0);
    }

    #[test]
    fn line_reflection_is_involutive() {
        let l = Line2::through(pt(0.3, 0.1), Vec2::new(1.0, 2.0));
        let p = pt(-0.7, 0.9);
        let r = l.reflect_point(l.reflect_point(p));
        assert!(r.distance(p) < 1e-12);
    }

    #[test]
    fn clip_segment_to_rect() {
        let r = Rect::new(pt(0.0, 0.0), pt(1.0, 1.0));
        let s = r.clip_segment(&seg(-1.0, 0.5, 2.0, 0.5)).unwrap();
        assert!(s.a.distance(pt(0.0, 0.5)) < 1e-12);
        assert!(s.b.distance(pt(1.0, 0.5)) < 1e-12);
        assert!(r.clip_segment(&seg(2.0, 2.0, 3.0, 3.0)).is_none());
    }

    #[test]
    fn generic_scalar_smoke_f32() {
        let a: Point2<f32> = Point2::new(0.0, 0.0);
        let b: Point2<f32> = Point2::new(3.0, 4.0);
        assert!((a.distance(b) - 5.0).abs() < 1e-6);
    }
}
