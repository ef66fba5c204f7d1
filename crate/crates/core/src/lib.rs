//! Opacity verification and quantitative audits for finite segment barriers
//! of convex polygons.
//!
//! A set of segments `O` is opaque for a convex domain `Ω` when every line
//! meeting `Ω` also meets `O`. The crate certifies opacity by an angular
//! sweep, builds the angular orientation measures of `O` and `∂Ω`, evaluates
//! the shadow functions `f` and `g`, and checks the Jones bound together with
//! its L² and Ḣ⁻² stability refinements.

pub mod error;
pub mod geometry;
pub mod measures;
pub mod shadows;
pub mod constructions;
pub mod opacity;
pub mod bounds;
pub mod optimizer;
pub mod scene;
pub mod cli;

pub use error::{Error, Result};
pub use geometry::{ConvexPolygon, Interval, Point2, Segment, SegmentSet};
