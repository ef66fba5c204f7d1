//! Named domains and barrier constructions, plus seeded random scenes.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::{ConvexPolygon, Point2, Segment, SegmentSet};

/// A domain together with a candidate opaque set.
#[derive(Clone, Debug, PartialEq)]
pub struct SceneSpec {
    pub name: String,
    pub domain: ConvexPolygon,
    pub segments: SegmentSet,
    pub expected_length: Option<f64>,
    pub expected_opaque: Option<bool>,
}

impl SceneSpec {
    pub fn new(name: impl Into<String>, domain: ConvexPolygon, segments: SegmentSet) -> Self {
        Self {
            name: name.into(),
            domain,
            segments,
            expected_length: None,
            expected_opaque: None,
        }
    }

    pub fn total_length(&self) -> f64 {
        self.segments.total_length()
    }

    /// Appends the domain boundary edges to the segment set, which makes any
    /// scene opaque.
    pub fn with_boundary(mut self) -> Self {
        let edges = self.domain.edge_segments();
        self.segments.extend(edges.segments().iter().copied());
        if let Some(l) = self.expected_length.as_mut() {
            *l += self.domain.perimeter();
        }
        self.expected_opaque = Some(true);
        self
    }

    /// Applies `f` to every vertex and endpoint. Expected values are dropped.
    pub fn map(&self, f: impl Fn(Point2) -> Point2) -> Result<SceneSpec> {
        Ok(SceneSpec {
            name: self.name.clone(),
            domain: self.domain.map(&f)?,
            segments: self.segments.map(&f)?,
            expected_length: None,
            expected_opaque: self.expected_opaque,
        })
    }

    pub fn scaled(&self, factor: f64) -> Result<SceneSpec> {
        let mut s = self.map(|p| p * factor)?;
        s.expected_length = self.expected_length.map(|l| l * factor);
        Ok(s)
    }
}

fn seg(a: Point2, b: Point2) -> Segment {
    Segment::new(a, b).expect("construction segments are non-degenerate")
}

/// Abscissa of the Fermat point `(t, t)` of the corners `(0,0), (1,0), (0,1)`.
pub fn square_steiner_parameter() -> f64 {
    (3.0 - 3f64.sqrt()) / 6.0
}

/// Unit square with the conjectured shortest barrier: the half-diagonal
/// `(1/2,1/2)–(1,1)` and the Steiner tree of the other three corners.
pub fn square_conjectured() -> SceneSpec {
    let t = square_steiner_parameter();
    let steiner = Point2::new(t, t);
    let segments = SegmentSet::new(vec![
        seg(Point2::new(0.5, 0.5), Point2::new(1.0, 1.0)),
        seg(Point2::new(0.0, 0.0), steiner),
        seg(steiner, Point2::new(1.0, 0.0)),
        seg(steiner, Point2::new(0.0, 1.0)),
    ]);
    SceneSpec {
        name: "square-conjectured".into(),
        domain: ConvexPolygon::unit_square(),
        segments,
        expected_length: Some(2f64.sqrt() + 1.5f64.sqrt()),
        expected_opaque: Some(true),
    }
}

/// Equilateral triangle with the three legs from its center to the vertices.
pub fn triangle_tripod(side: f64) -> Result<SceneSpec> {
    if !(side > 0.0) || !side.is_finite() {
        return Err(Error::Parameter(format!("side must be positive, got {side}")));
    }
    let h = side * 3f64.sqrt() / 2.0;
    let corners = [
        Point2::new(0.0, 0.0),
        Point2::new(side, 0.0),
        Point2::new(side / 2.0, h),
    ];
    let center = Point2::new(side / 2.0, h / 3.0);
    Ok(SceneSpec {
        name: "triangle-tripod".into(),
        domain: ConvexPolygon::new(corners.to_vec())?,
        segments: SegmentSet::new(corners.iter().map(|&c| seg(center, c)).collect()),
        expected_length: Some(side * 3f64.sqrt()),
        expected_opaque: Some(true),
    })
}

/// `[0,w] × [0,h]` with both short sides and one long side.
pub fn rectangle_three_sides(w: f64, h: f64) -> Result<SceneSpec> {
    if !(w > 0.0 && h > 0.0) || !w.is_finite() || !h.is_finite() {
        return Err(Error::Parameter(format!("rectangle needs w, h > 0 (w={w}, h={h})")));
    }
    let domain = ConvexPolygon::rectangle(0.0, 0.0, w, h)?;
    let (p00, p10, p11, p01) = (
        Point2::new(0.0, 0.0),
        Point2::new(w, 0.0),
        Point2::new(w, h),
        Point2::new(0.0, h),
    );
    let segments = if w >= h {
        vec![seg(p00, p01), seg(p10, p11), seg(p00, p10)]
    } else {
        vec![seg(p00, p10), seg(p01, p11), seg(p00, p01)]
    };
    Ok(SceneSpec {
        name: "rectangle-three-sides".into(),
        domain,
        segments: SegmentSet::new(segments),
        expected_length: Some(w.max(h) + 2.0 * w.min(h)),
        expected_opaque: Some(true),
    })
}

/// Regular `2·n_arc`-gon inscribed in the unit circle, barred by its `n_arc`
/// lower edges plus the whiskers `(±1,0)–(±1,1)`.
pub fn disk_half_circle_whiskers(n_arc: usize) -> Result<SceneSpec> {
    if n_arc < 64 {
        return Err(Error::Parameter(format!("n_arc must be >= 64, got {n_arc}")));
    }
    let domain = ConvexPolygon::regular(2 * n_arc, 1.0)?;
    let v = domain.vertices();
    let mut segments: Vec<Segment> = (0..n_arc)
        .map(|k| seg(v[n_arc + k], v[(n_arc + k + 1) % (2 * n_arc)]))
        .collect();
    segments.push(seg(v[0], Point2::new(v[0].x, 1.0)));
    segments.push(seg(v[n_arc], Point2::new(v[n_arc].x, 1.0)));
    let chord = 2.0 * (PI / (2.0 * n_arc as f64)).sin();
    Ok(SceneSpec {
        name: "disk-whiskers".into(),
        domain,
        segments: SegmentSet::new(segments),
        expected_length: Some(n_arc as f64 * chord + 2.0),
        expected_opaque: Some(true),
    })
}

/// Unit square barred by its own boundary.
pub fn square_boundary() -> SceneSpec {
    let domain = ConvexPolygon::unit_square();
    SceneSpec {
        name: "square-boundary".into(),
        segments: domain.edge_segments(),
        domain,
        expected_length: Some(4.0),
        expected_opaque: Some(true),
    }
}

/// Unit square with only its bottom and top sides; horizontal lines slip through.
pub fn square_two_opposite_sides() -> SceneSpec {
    SceneSpec {
        name: "square-two-sides".into(),
        domain: ConvexPolygon::unit_square(),
        segments: SegmentSet::new(vec![
            seg(Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)),
            seg(Point2::new(0.0, 1.0), Point2::new(1.0, 1.0)),
        ]),
        expected_length: Some(2.0),
        expected_opaque: Some(false),
    }
}

/// SplitMix64 generator: state advances by `0x9E3779B97F4A7C15`, output is
/// mixed with multipliers `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB`.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform index in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        ((self.next_f64() * n as f64) as usize).min(n - 1)
    }

    /// Uniform point in the disk of radius `r` about the origin.
    pub fn in_disk(&mut self, r: f64) -> Point2 {
        let rho = r * self.next_f64().sqrt();
        let phi = TAU * self.next_f64();
        Point2::new(rho * phi.cos(), rho * phi.sin())
    }
}

/// Convex hull by the monotone chain, counterclockwise, collinear points dropped.
pub fn convex_hull(mut points: Vec<Point2>) -> Vec<Point2> {
    points.sort_by(|p, q| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)));
    points.dedup();
    if points.len() < 3 {
        return points;
    }
    let turn = |o: Point2, a: Point2, b: Point2| (a - o).cross(b - o);
    let mut lower: Vec<Point2> = Vec::new();
    for &p in &points {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for &p in points.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

const MAX_RETRIES: usize = 100;

/// Convex hull of `n_vertices` uniform points in the unit disk, with
/// `n_segments` random segments whose endpoints are uniform in the disk of
/// radius 1.5. Deterministic in `seed`.
pub fn random_scene(seed: u64, n_vertices: usize, n_segments: usize) -> Result<SceneSpec> {
    if n_vertices < 3 {
        return Err(Error::Parameter(format!("n_vertices must be >= 3, got {n_vertices}")));
    }
    let mut rng = SplitMix64::new(seed);
    let mut domain = None;
    for _ in 0..MAX_RETRIES {
        let pts: Vec<Point2> = (0..n_vertices).map(|_| rng.in_disk(1.0)).collect();
        let hull = convex_hull(pts);
        if hull.len() < 3 {
            continue;
        }
        if let Ok(poly) = ConvexPolygon::new(hull) {
            if poly.area() > 1e-3 {
                domain = Some(poly);
                break;
            }
        }
    }
    let domain = domain.ok_or_else(|| {
        Error::InvalidPolygon(format!("no non-degenerate hull after {MAX_RETRIES} draws (seed {seed})"))
    })?;
    let mut segments = SegmentSet::default();
    while segments.len() < n_segments {
        let (a, b) = (rng.in_disk(1.5), rng.in_disk(1.5));
        if a.distance(b) > 1e-6 {
            segments.push(seg(a, b));
        }
    }
    Ok(SceneSpec {
        name: format!("random-{seed}"),
        domain,
        segments,
        expected_length: None,
        expected_opaque: None,
    })
}

/// Parameters accepted by [`by_name`]; unused fields are ignored.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedParams {
    pub side: f64,
    pub width: f64,
    pub height: f64,
    pub n_arc: usize,
    pub seed: u64,
    pub n_vertices: usize,
    pub n_segments: usize,
}

impl Default for NamedParams {
    fn default() -> Self {
        Self {
            side: 1.0,
            width: 1.0,
            height: 0.01,
            n_arc: 1024,
            seed: 0,
            n_vertices: 12,
            n_segments: 6,
        }
    }
}

pub const NAMES: &[&str] = &[
    "square-conjectured",
    "triangle-tripod",
    "rectangle-three-sides",
    "disk-whiskers",
    "square-boundary",
    "square-two-sides",
    "random",
    "random-opaque",
];

pub fn by_name(name: &str, params: &NamedParams) -> Result<SceneSpec> {
    match name {
        "square-conjectured" => Ok(square_conjectured()),
        "triangle-tripod" => triangle_tripod(params.side),
        "rectangle-three-sides" => rectangle_three_sides(params.width, params.height),
        "disk-whiskers" => disk_half_circle_whiskers(params.n_arc),
        "square-boundary" => Ok(square_boundary()),
        "square-two-sides" => Ok(square_two_opposite_sides()),
        "random" => random_scene(params.seed, params.n_vertices, params.n_segments),
        "random-opaque" => Ok(random_scene(params.seed, params.n_vertices, params.n_segments)?.with_boundary()),
        other => Err(Error::Parameter(format!(
            "unknown construction '{other}'; expected one of {}",
            NAMES.join(", ")
        ))),
    }
}
