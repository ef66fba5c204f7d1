//! Scene files: one TOML document holding a convex domain and the barrier.
//!
//! ```toml
//! name = "square-conjectured"
//! segments = [
//!     [[0.5, 0.5], [1.0, 1.0]],
//!     [[0.0, 0.0], [0.21132486540518713, 0.21132486540518713]],
//! ]
//!
//! [domain]
//! kind = "polygon"
//! vertices = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
//!
//! [metadata]
//! expected_length = 2.638958433764305
//! expected_opaque = true
//! ```
//!
//! Besides `polygon`, the domain may be a named shape:
//! `unit-square`, `rectangle` (`x0`, `y0`, `width`, `height`),
//! `regular-polygon` (`n`, `radius`) or `equilateral-triangle` (`side`).
//! `opaque_set` is accepted as an alias of `segments`. Metadata keys other
//! than `expected_length` and `expected_opaque` are ignored.

use serde::Deserialize;

use crate::constructions::SceneSpec;
use crate::error::{Error, Result};
use crate::geometry::{ConvexPolygon, Point2, Segment, SegmentSet};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneFile {
    #[serde(default)]
    name: Option<String>,
    domain: DomainFile,
    #[serde(alias = "opaque_set")]
    segments: Vec<[[f64; 2]; 2]>,
    #[serde(default)]
    metadata: Option<toml::Table>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum DomainFile {
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    UnitSquare,
    Rectangle {
        #[serde(default)]
        x0: f64,
        #[serde(default)]
        y0: f64,
        width: f64,
        height: f64,
    },
    RegularPolygon {
        n: usize,
        #[serde(default = "one")]
        radius: f64,
    },
    EquilateralTriangle {
        #[serde(default = "one")]
        side: f64,
    },
}

fn one() -> f64 {
    1.0
}

fn field_error(field: &str, err: Error) -> Error {
    Error::Parse(format!("{field}: {err}"))
}

impl DomainFile {
    fn build(self) -> Result<ConvexPolygon> {
        let poly = match self {
            DomainFile::Polygon { vertices } => {
                ConvexPolygon::new(vertices.iter().map(|v| Point2::new(v[0], v[1])).collect())
            }
            DomainFile::UnitSquare => Ok(ConvexPolygon::unit_square()),
            DomainFile::Rectangle { x0, y0, width, height } => ConvexPolygon::rectangle(x0, y0, width, height),
            DomainFile::RegularPolygon { n, radius } => ConvexPolygon::regular(n, radius),
            DomainFile::EquilateralTriangle { side } => {
                let h = side * 3f64.sqrt() / 2.0;
                ConvexPolygon::new(vec![
                    Point2::new(0.0, 0.0),
                    Point2::new(side, 0.0),
                    Point2::new(side / 2.0, h),
                ])
            }
        };
        poly.map_err(|e| field_error("domain", e))
    }
}

/// Parses a scene document. Syntax errors carry the line and column; invalid
/// geometry names the offending field, e.g. `segments[2]`.
pub fn parse_scene(text: &str) -> Result<SceneSpec> {
    let file: SceneFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string().trim_end().to_string()))?;
    let domain = file.domain.build()?;
    let mut segments = Vec::with_capacity(file.segments.len());
    for (i, [a, b]) in file.segments.iter().enumerate() {
        let s = Segment::new(Point2::new(a[0], a[1]), Point2::new(b[0], b[1]))
            .map_err(|e| field_error(&format!("segments[{i}]"), e))?;
        segments.push(s);
    }
    let mut spec = SceneSpec::new(file.name.unwrap_or_else(|| "scene".into()), domain, SegmentSet::new(segments));
    if let Some(meta) = file.metadata {
        if let Some(v) = meta.get("expected_length") {
            let l = v
                .as_float()
                .or_else(|| v.as_integer().map(|i| i as f64))
                .ok_or_else(|| Error::Parse("metadata.expected_length: expected a number".into()))?;
            spec.expected_length = Some(l);
        }
        if let Some(v) = meta.get("expected_opaque") {
            let b = v
                .as_bool()
                .ok_or_else(|| Error::Parse("metadata.expected_opaque: expected a boolean".into()))?;
            spec.expected_opaque = Some(b);
        }
    }
    Ok(spec)
}

/// Shortest decimal that parses back to the same `f64`, always TOML-valid.
fn num(v: f64) -> String {
    let s = format!("{v:?}");
    if s.contains(['.', 'e', 'n', 'i']) {
        s
    } else {
        format!("{s}.0")
    }
}

fn pair(p: Point2) -> String {
    format!("[{}, {}]", num(p.x), num(p.y))
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

/// Serializes a scene; [`parse_scene`] restores it bit for bit. The domain
/// is always written as an explicit vertex list.
pub fn scene_to_toml(scene: &SceneSpec) -> String {
    let mut out = format!("name = {}\nsegments = [\n", quote(&scene.name));
    for s in &scene.segments {
        out.push_str(&format!("    [{}, {}],\n", pair(s.a()), pair(s.b())));
    }
    out.push_str("]\n\n[domain]\nkind = \"polygon\"\nvertices = [\n");
    for &v in scene.domain.vertices() {
        out.push_str(&format!("    {},\n", pair(v)));
    }
    out.push_str("]\n");
    if scene.expected_length.is_some() || scene.expected_opaque.is_some() {
        out.push_str("\n[metadata]\n");
        if let Some(l) = scene.expected_length {
            out.push_str(&format!("expected_length = {}\n", num(l)));
        }
        if let Some(b) = scene.expected_opaque {
            out.push_str(&format!("expected_opaque = {b}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{by_name, NamedParams, NAMES};

    #[test]
    fn round_trip_is_exact() {
        let params = NamedParams {
            n_arc: 64,
            ..NamedParams::default()
        };
        for name in NAMES {
            let s = by_name(name, &params).unwrap();
            let text = scene_to_toml(&s);
            let back = parse_scene(&text).unwrap();
            assert_eq!(back, s, "{name}");
        }
    }

    #[test]
    fn named_domains_and_alias() {
        let text = r#"
opaque_set = [[[0, 0], [1, 0]], [[0, 0], [0, 1]], [[1, 0], [1, 1]]]
[domain]
kind = "unit-square"
"#;
        let s = parse_scene(text).unwrap();
        assert_eq!(s.domain, ConvexPolygon::unit_square());
        assert_eq!(s.segments.len(), 3);
        assert_eq!(s.name, "scene");

        let r = parse_scene("segments = []\n[domain]\nkind = \"rectangle\"\nwidth = 2\nheight = 0.5\n").unwrap();
        assert!((r.domain.perimeter() - 5.0).abs() < 1e-15);
        let g = parse_scene("segments = []\n[domain]\nkind = \"regular-polygon\"\nn = 6\n").unwrap();
        assert_eq!(g.domain.len(), 6);
        let t = parse_scene("segments = []\n[domain]\nkind = \"equilateral-triangle\"\nside = 2\n").unwrap();
        assert!((t.domain.perimeter() - 6.0).abs() < 1e-15);
    }

    #[test]
    fn errors_name_the_field() {
        let bad_seg = "segments = [[[0, 0], [1, 1]], [[2, 2], [2, 2]]]\n[domain]\nkind = \"unit-square\"\n";
        match parse_scene(bad_seg) {
            Err(Error::Parse(msg)) => assert!(msg.contains("segments[1]"), "{msg}"),
            other => panic!("{other:?}"),
        }
        let bad_poly = "segments = []\n[domain]\nkind = \"polygon\"\nvertices = [[0, 0], [1, 0], [0, 1], [1, 1]]\n";
        match parse_scene(bad_poly) {
            Err(Error::Parse(msg)) => assert!(msg.contains("domain"), "{msg}"),
            other => panic!("{other:?}"),
        }
        let syntax = "segments = [[[0, 0], [1, 1]]\n[domain]\nkind = \"unit-square\"\n";
        match parse_scene(syntax) {
            Err(Error::Parse(msg)) => assert!(msg.contains("line"), "{msg}"),
            other => panic!("{other:?}"),
        }
        let unknown = "segments = []\n[domain]\nkind = \"circle\"\n";
        assert!(matches!(parse_scene(unknown), Err(Error::Parse(_))));
        let missing = "[domain]\nkind = \"unit-square\"\n";
        match parse_scene(missing) {
            Err(Error::Parse(msg)) => assert!(msg.contains("segments"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn number_formatting_parses_back() {
        for v in [0.0, -0.0, 1.0, 1e-7, 1e300, -2.5e-310, 0.1 + 0.2, 123456789.0] {
            let doc = format!("x = {}", num(v));
            let t: toml::Table = doc.parse().unwrap();
            assert_eq!(t["x"].as_float().unwrap().to_bits(), v.to_bits(), "{v}");
        }
    }
}
