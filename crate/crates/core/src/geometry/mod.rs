//! Polyline curves, their vector measures, the cut operation and cone
//! spanning surfaces.

pub mod curve;
pub mod fixtures;
pub mod io;
pub mod measure;
pub mod surface;

pub use curve::{circle_distance, Curve, DEFAULT_SAMPLES_PER_UNIT};
pub use io::{curve_from_json, curve_to_json, read_curve, write_curve, CurveJson};
pub use measure::{measure_of, point_segment_distance, CurrentMeasure, Segment};
pub use surface::{cone_surface, curve_chain, isoperimetric_ratio, SurfaceMeasure, Triangle};

use std::collections::BTreeSet;

use crate::{Point, Result};

/// Builds a curve; see [`Curve::new`].
pub fn build_curve(dim: usize, nodes: Vec<Point>, closed: bool, corners: BTreeSet<usize>) -> Result<Curve> {
    Curve::new(dim, nodes, closed, corners)
}

/// See [`Curve::cut`].
pub fn cut(curve: &Curve, t: f64, t_prime: f64) -> Result<(Curve, Curve)> {
    curve.cut(t, t_prime)
}
