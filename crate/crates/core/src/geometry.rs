//! Planar primitives: points, segments, convex polygons and their projections.
//!
//! Angles follow the counterclockwise convention with `u(θ) = (cos θ, sin θ)`.
//! Projections onto `u(θ)` are the only geometric query the rest of the crate
//! needs; widths, shadows and opacity are all phrased through them.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for angle wraparound and atom merging on the torus.
pub const ANGLE_TOL: f64 = 1e-12;

/// Relative tolerance for merging collinear polygon vertices.
const COLLINEAR_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    /// Rotation about the origin by `angle` radians (counterclockwise).
    pub fn rotated(self, angle: f64) -> Point2 {
        let (s, c) = angle.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    #[inline]
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Unit vector `u(θ) = (cos θ, sin θ)`.
#[inline]
pub fn direction(theta: f64) -> Point2 {
    let (s, c) = theta.sin_cos();
    Point2::new(c, s)
}

/// Reduces an angle to `[0, 2π)`, snapping values within [`ANGLE_TOL`] of `2π` to 0.
pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU - ANGLE_TOL {
        0.0
    } else {
        r
    }
}

/// Reduces an angle to `[0, π)`, snapping values within [`ANGLE_TOL`] of `π` to 0.
pub fn reduce_half_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(PI);
    if r >= PI - ANGLE_TOL {
        0.0
    } else {
        r
    }
}

/// Distance between two angles on the circle, in `[0, π]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Closed real interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    /// Builds an interval, ordering the endpoints.
    pub fn new(a: f64, b: f64) -> Self {
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    #[inline]
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    #[inline]
    pub fn contains(&self, t: f64, tol: f64) -> bool {
        t >= self.lo - tol && t <= self.hi + tol
    }
}

/// A non-degenerate straight segment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    a: Point2,
    b: Point2,
}

impl Segment {
    pub fn new(a: Point2, b: Point2) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidSegment(format!(
                "non-finite endpoint in {a} - {b}"
            )));
        }
        if a == b {
            return Err(Error::InvalidSegment(format!("zero length at {a}")));
        }
        Ok(Self { a, b })
    }

    #[inline]
    pub fn a(&self) -> Point2 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> Point2 {
        self.b
    }

    #[inline]
    pub fn endpoints(&self) -> [Point2; 2] {
        [self.a, self.b]
    }

    #[inline]
    pub fn vector(&self) -> Point2 {
        self.b - self.a
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.vector().norm()
    }

    pub fn midpoint(&self) -> Point2 {
        (self.a + self.b) * 0.5
    }

    /// Direction of the segment reduced mod π, in `[0, π)`.
    pub fn angle(&self) -> f64 {
        let v = self.vector();
        reduce_half_angle(v.y.atan2(v.x))
    }

    /// Unit normal, the direction vector rotated by +π/2.
    pub fn normal(&self) -> Point2 {
        let v = self.vector();
        let n = v.norm();
        Point2::new(-v.y / n, v.x / n)
    }

    /// Projection of the segment onto `u(θ)`.
    pub fn projection(&self, theta: f64) -> Interval {
        let u = direction(theta);
        Interval::new(self.a.dot(u), self.b.dot(u))
    }

    /// Euclidean distance from `p` to the closed segment.
    pub fn distance_to(&self, p: Point2) -> f64 {
        let v = self.vector();
        let t = ((p - self.a).dot(v) / v.dot(v)).clamp(0.0, 1.0);
        p.distance(self.a + v * t)
    }

    pub fn map(&self, f: impl Fn(Point2) -> Point2) -> Result<Segment> {
        Segment::new(f(self.a), f(self.b))
    }
}

/// Projection of a segment onto the direction `u(θ)`.
pub fn segment_projection(seg: &Segment, theta: f64) -> Interval {
    seg.projection(theta)
}

/// A finite collection of segments, the candidate opaque set.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SegmentSet {
    segments: Vec<Segment>,
}

impl SegmentSet {
    pub fn new(segments: Vec<Segment>) -> Self {
        Self { segments }
    }

    pub fn from_endpoints(pairs: &[(Point2, Point2)]) -> Result<Self> {
        pairs
            .iter()
            .map(|&(a, b)| Segment::new(a, b))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    #[inline]
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Segment> {
        self.segments.iter()
    }

    pub fn push(&mut self, seg: Segment) {
        self.segments.push(seg);
    }

    pub fn extend(&mut self, other: impl IntoIterator<Item = Segment>) {
        self.segments.extend(other);
    }

    pub fn remove(&mut self, index: usize) -> Segment {
        self.segments.remove(index)
    }

    pub fn replace(&mut self, index: usize, seg: Segment) {
        self.segments[index] = seg;
    }

    /// Total length `Σ|ℓ_i|`.
    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    pub fn map(&self, f: impl Fn(Point2) -> Point2) -> Result<SegmentSet> {
        self.segments
            .iter()
            .map(|s| s.map(&f))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

impl<'a> IntoIterator for &'a SegmentSet {
    type Item = &'a Segment;
    type IntoIter = std::slice::Iter<'a, Segment>;
    fn into_iter(self) -> Self::IntoIter {
        self.segments.iter()
    }
}

/// A convex polygon with counterclockwise vertices.
///
/// Construction validates convexity, drops a repeated closing vertex, merges
/// collinear runs and reorients clockwise input.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

impl ConvexPolygon {
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self> {
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidPolygon(format!("non-finite vertex {p}")));
        }
        if vertices.len() > 3 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon(format!(
                "need at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(Error::InvalidPolygon(format!(
                    "consecutive vertices {i} and {} coincide at {}",
                    (i + 1) % n,
                    vertices[i]
                )));
            }
        }
        let area = signed_area(&vertices);
        if !(area.abs() > 0.0) {
            return Err(Error::InvalidPolygon("zero area".into()));
        }
        if area < 0.0 {
            vertices.reverse();
        }
        merge_collinear(&mut vertices)?;
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon(
                "fewer than 3 vertices after merging collinear runs".into(),
            ));
        }
        let n = vertices.len();
        let mut turning = 0.0;
        for i in 0..n {
            let e1 = vertices[(i + 1) % n] - vertices[i];
            let e2 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
            let c = e1.cross(e2);
            if c < -COLLINEAR_TOL * e1.norm() * e2.norm() {
                return Err(Error::InvalidPolygon(format!(
                    "not convex at vertex {}",
                    (i + 1) % n
                )));
            }
            turning += c.atan2(e1.dot(e2));
        }
        if (turning - TAU).abs() > 1e-6 {
            return Err(Error::InvalidPolygon(format!(
                "boundary winds {:.3} turns, expected a simple polygon",
                turning / TAU
            )));
        }
        if !(signed_area(&vertices) > 0.0) {
            return Err(Error::InvalidPolygon("zero area".into()));
        }
        Ok(Self { vertices })
    }

    /// Axis-aligned rectangle `[x0, x0+w] × [y0, y0+h]`.
    pub fn rectangle(x0: f64, y0: f64, w: f64, h: f64) -> Result<Self> {
        Self::new(vec![
            Point2::new(x0, y0),
            Point2::new(x0 + w, y0),
            Point2::new(x0 + w, y0 + h),
            Point2::new(x0, y0 + h),
        ])
    }

    pub fn unit_square() -> Self {
        Self::rectangle(0.0, 0.0, 1.0, 1.0).expect("unit square is valid")
    }

    /// Regular `n`-gon inscribed in the circle of radius `radius` about the
    /// origin, with a vertex at angle 0.
    pub fn regular(n: usize, radius: f64) -> Result<Self> {
        if n < 3 || !(radius > 0.0) {
            return Err(Error::Parameter(format!(
                "regular polygon needs n >= 3 and radius > 0 (n={n}, radius={radius})"
            )));
        }
        Self::new(
            (0..n)
                .map(|k| direction(TAU * k as f64 / n as f64) * radius)
                .collect(),
        )
    }

    #[inline]
    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Never true for a validated polygon; present for API symmetry with `len`.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Boundary edges in counterclockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn edge_segments(&self) -> SegmentSet {
        SegmentSet::new(
            self.edges()
                .map(|(a, b)| Segment::new(a, b).expect("validated polygon edge"))
                .collect(),
        )
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.distance(b)).sum()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn bounding_box(&self) -> (Point2, Point2) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices[1..] {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }

    pub fn bounding_box_center(&self) -> Point2 {
        let (lo, hi) = self.bounding_box();
        (lo + hi) * 0.5
    }

    /// Largest vertex distance from the bounding-box center.
    pub fn bounding_radius(&self) -> f64 {
        let c = self.bounding_box_center();
        self.vertices
            .iter()
            .map(|v| v.distance(c))
            .fold(0.0, f64::max)
    }

    /// `[min_v ⟨v,u(θ)⟩, max_v ⟨v,u(θ)⟩]`.
    pub fn support_interval(&self, theta: f64) -> Interval {
        let u = direction(theta);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in &self.vertices {
            let p = v.dot(u);
            lo = lo.min(p);
            hi = hi.max(p);
        }
        Interval { lo, hi }
    }

    /// Length of the projection onto `u(θ)`.
    pub fn width(&self, theta: f64) -> f64 {
        self.support_interval(theta).length()
    }

    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        self.edges()
            .all(|(a, b)| (b - a).cross(p - a) >= -tol * (b - a).norm())
    }

    pub fn map(&self, f: impl Fn(Point2) -> Point2) -> Result<ConvexPolygon> {
        ConvexPolygon::new(self.vertices.iter().map(|&v| f(v)).collect())
    }
}

pub fn support_interval(poly: &ConvexPolygon, theta: f64) -> Interval {
    poly.support_interval(theta)
}

pub fn width(poly: &ConvexPolygon, theta: f64) -> f64 {
    poly.width(theta)
}

pub fn perimeter(poly: &ConvexPolygon) -> f64 {
    poly.perimeter()
}

fn signed_area(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    let mut acc = 0.0;
    for i in 0..n {
        acc += vertices[i].cross(vertices[(i + 1) % n]);
    }
    0.5 * acc
}

fn merge_collinear(vertices: &mut Vec<Point2>) -> Result<()> {
    loop {
        let n = vertices.len();
        if n < 3 {
            return Ok(());
        }
        let mut removed = false;
        for i in 0..n {
            let prev = vertices[(i + n - 1) % n];
            let cur = vertices[i];
            let next = vertices[(i + 1) % n];
            let e1 = cur - prev;
            let e2 = next - cur;
            if e1.cross(e2).abs() <= COLLINEAR_TOL * e1.norm() * e2.norm() {
                if e1.dot(e2) < 0.0 {
                    return Err(Error::InvalidPolygon(format!(
                        "boundary doubles back at vertex {cur}"
                    )));
                }
                vertices.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            return Ok(());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn brute_interval(poly: &ConvexPolygon, theta: f64) -> Interval {
        let u = direction(theta);
        let vals: Vec<f64> = poly.vertices().iter().map(|v| v.dot(u)).collect();
        Interval {
            lo: vals.iter().cloned().fold(f64::INFINITY, f64::min),
            hi: vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    #[test]
    fn unit_square_support() {
        let sq = ConvexPolygon::unit_square();
        let i0 = sq.support_interval(0.0);
        assert_eq!((i0.lo, i0.hi), (0.0, 1.0));
        let i45 = sq.support_interval(FRAC_PI_4);
        let oracle = brute_interval(&sq, FRAC_PI_4);
        assert!(i45.lo.abs() < 1e-15 && (i45.hi - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(i45, oracle);
        let shifted = sq.support_interval(FRAC_PI_4 + TAU);
        assert!((shifted.lo - i45.lo).abs() < 1e-14 && (shifted.hi - i45.hi).abs() < 1e-14);
    }

    #[test]
    fn widths_of_square_and_fine_ngon() {
        let sq = ConvexPolygon::unit_square();
        assert!((sq.width(0.0) - 1.0).abs() < 1e-15);
        assert!((sq.width(FRAC_PI_4) - 2f64.sqrt()).abs() < 1e-15);
        let ngon = ConvexPolygon::regular(4096, 1.0).unwrap();
        for k in 0..50 {
            let theta = 0.1234 * k as f64;
            assert!((ngon.width(theta) - 2.0).abs() < 3e-6);
        }
    }

    #[test]
    fn perimeters() {
        assert!((ConvexPolygon::unit_square().perimeter() - 4.0).abs() < 1e-15);
        let tri = ConvexPolygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.5, 3f64.sqrt() / 2.0),
        ])
        .unwrap();
        assert!((tri.perimeter() - 3.0).abs() < 1e-14);
        let ngon = ConvexPolygon::regular(4096, 1.0).unwrap();
        let exact = 2.0 * 4096.0 * (PI / 4096.0).sin();
        assert!((ngon.perimeter() - exact).abs() < 1e-12);
        assert!((ngon.perimeter() - TAU).abs() < 1e-5);
    }

    #[test]
    fn segment_projections() {
        let s = Segment::new(Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)).unwrap();
        assert_eq!(s.projection(0.0), Interval { lo: 0.0, hi: 1.0 });
        let p = s.projection(PI / 2.0);
        assert!(p.lo.abs() < 1e-16 && p.hi.abs() < 1e-16);
        let p = s.projection(PI / 3.0);
        assert!(p.lo.abs() < 1e-16 && (p.hi - 0.5).abs() < 1e-15);
    }

    #[test]
    fn segment_angle_and_normal() {
        let s = Segment::new(Point2::new(1.0, 1.0), Point2::new(0.0, 0.0)).unwrap();
        assert!((s.angle() - FRAC_PI_4).abs() < 1e-15);
        let n = s.normal();
        assert!(n.dot(s.vector()).abs() < 1e-15);
        assert!((n.norm() - 1.0).abs() < 1e-15);
        let back = Segment::new(Point2::new(1.0, 0.0), Point2::new(0.0, 0.0)).unwrap();
        assert_eq!(back.angle(), 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Segment::new(Point2::new(1.0, 1.0), Point2::new(1.0, 1.0)).is_err());
        assert!(Segment::new(Point2::new(f64::NAN, 1.0), Point2::new(1.0, 1.0)).is_err());
        assert!(ConvexPolygon::new(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)]).is_err());
        assert!(ConvexPolygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(2.0, 0.0)
        ])
        .is_err());
        // non-convex dart
        assert!(ConvexPolygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(1.0, 0.5),
            Point2::new(1.0, 2.0),
        ])
        .is_err());
        // pentagram winds twice
        let star: Vec<Point2> = (0..5).map(|k| direction(TAU * (2 * k) as f64 / 5.0)).collect();
        assert!(ConvexPolygon::new(star).is_err());
    }

    #[test]
    fn merges_collinear_and_reorients() {
        let p = ConvexPolygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 0.5),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 0.0),
        ])
        .unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.area() > 0.0);
        assert!((p.perimeter() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn thin_rectangle_is_accepted() {
        let r = ConvexPolygon::rectangle(0.0, 0.0, 1.0, 1e-6).unwrap();
        assert!((r.perimeter() - 2.000002).abs() < 1e-12);
    }

    #[test]
    fn angle_reduction() {
        assert_eq!(reduce_angle(TAU - 1e-14), 0.0);
        assert!((reduce_angle(-FRAC_PI_4) - (TAU - FRAC_PI_4)).abs() < 1e-15);
        assert_eq!(reduce_half_angle(PI), 0.0);
        assert!((circular_distance(0.1, TAU - 0.1) - 0.2).abs() < 1e-14);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn polygon() -> impl Strategy<Value = ConvexPolygon> {
            (3usize..12, 0.2f64..3.0, 0.0f64..TAU, -5.0f64..5.0, -5.0f64..5.0).prop_map(
                |(n, r, rot, cx, cy)| {
                    ConvexPolygon::regular(n, r)
                        .unwrap()
                        .map(|p| p.rotated(rot) + Point2::new(cx, cy))
                        .unwrap()
                },
            )
        }

        proptest! {
            #[test]
            fn width_is_pi_periodic(poly in polygon(), theta in -10.0f64..10.0) {
                prop_assert!((poly.width(theta) - poly.width(theta + PI)).abs() < 1e-12);
            }

            #[test]
            fn width_is_lipschitz(poly in polygon(), theta in 0.0f64..TAU) {
                let c = poly.bounding_box_center();
                let centered = poly.map(|p| p - c).unwrap();
                let r = centered.bounding_radius();
                let h = 1e-5;
                let slope = (centered.width(theta + h) - centered.width(theta)).abs() / h;
                prop_assert!(slope <= 2.0 * r + 1e-6);
            }

            #[test]
            fn projection_width_matches_cosine(
                ax in -3.0f64..3.0, ay in -3.0f64..3.0, bx in -3.0f64..3.0, by in -3.0f64..3.0,
                theta in -7.0f64..7.0,
            ) {
                prop_assume!((ax - bx).abs() + (ay - by).abs() > 1e-6);
                let s = Segment::new(Point2::new(ax, ay), Point2::new(bx, by)).unwrap();
                let w = s.projection(theta).length();
                prop_assert!((w - s.length() * (theta - s.angle()).cos().abs()).abs() < 1e-12);
            }

            #[test]
            fn support_contains_every_vertex(poly in polygon(), theta in 0.0f64..TAU) {
                let iv = poly.support_interval(theta);
                let u = direction(theta);
                for v in poly.vertices() {
                    prop_assert!(iv.contains(v.dot(u), 0.0));
                }
            }
        }
    }
}
