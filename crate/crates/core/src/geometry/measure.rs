use serde::{Deserialize, Serialize};

use super::curve::{bounding_box, Curve};
use crate::quad::gauss_legendre;
use crate::Point;

/// One straight piece of a current: the measure `w · τ H¹⌞[start, end]`
/// with `τ` the unit vector from `start` to `end`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start: Point,
    pub end: Point,
    pub weight: f64,
}

impl Segment {
    pub fn new(start: Point, end: Point, weight: f64) -> Self {
        Self { start, end, weight }
    }

    pub fn length(&self) -> f64 {
        (self.end - self.start).norm()
    }

    pub fn orientation(&self) -> Point {
        let v = self.end - self.start;
        v / v.norm()
    }

    pub fn mass(&self) -> f64 {
        self.weight.abs() * self.length()
    }
}

/// A vector-valued measure given as a weighted segment soup.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CurrentMeasure {
    pub dim: usize,
    pub segments: Vec<Segment>,
}

impl CurrentMeasure {
    pub fn new(dim: usize, segments: Vec<Segment>) -> Self {
        Self { dim, segments }
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, segments: Vec::new() }
    }

    /// Total variation `Σ |w| · |end - start|`.
    pub fn total_mass(&self) -> f64 {
        self.segments.iter().map(Segment::mass).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.iter().all(|s| s.weight == 0.0)
    }

    /// `∫ Φ · dμ`, with three Gauss points per segment (exact for
    /// polynomial fields of degree at most 5).
    pub fn pair<F: Fn(&Point) -> Point>(&self, field: F) -> f64 {
        let rule = gauss_legendre(3);
        self.segments
            .iter()
            .map(|seg| {
                let d = seg.end - seg.start;
                let acc: f64 = rule
                    .iter()
                    .map(|&(u, w)| {
                        let p = seg.start + d * (0.5 * (u + 1.0));
                        0.5 * w * field(&p).dot(&d)
                    })
                    .sum();
                seg.weight * acc
            })
            .sum()
    }

    /// `∫ |Φ| d‖μ‖`, the natural scale for relative pairing errors.
    pub fn pair_abs<F: Fn(&Point) -> Point>(&self, field: F) -> f64 {
        let rule = gauss_legendre(3);
        self.segments
            .iter()
            .map(|seg| {
                let d = seg.end - seg.start;
                let len = d.norm();
                let acc: f64 = rule
                    .iter()
                    .map(|&(u, w)| 0.5 * w * field(&(seg.start + d * (0.5 * (u + 1.0)))).norm())
                    .sum();
                seg.weight.abs() * len * acc
            })
            .sum()
    }

    /// Sum of measures as a concatenated segment soup.
    pub fn superpose<'a>(dim: usize, parts: impl IntoIterator<Item = (&'a CurrentMeasure, f64)>) -> Self {
        let mut segments = Vec::new();
        for (m, w) in parts {
            segments.extend(m.segments.iter().map(|s| Segment::new(s.start, s.end, s.weight * w)));
        }
        Self { dim, segments }
    }

    /// Push-forward under `x ↦ λx`.
    pub fn dilated(&self, lambda: f64) -> Self {
        let segments = self
            .segments
            .iter()
            .map(|s| Segment::new(s.start * lambda, s.end * lambda, s.weight))
            .collect();
        Self { dim: self.dim, segments }
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        bounding_box(self.segments.iter().flat_map(|s| [&s.start, &s.end]))
    }

    /// Distance from `x` to the nearest segment.
    pub fn distance_to(&self, x: &Point) -> f64 {
        self.segments
            .iter()
            .map(|s| point_segment_distance(x, &s.start, &s.end))
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn point_segment_distance(x: &Point, a: &Point, b: &Point) -> f64 {
    let d = b - a;
    let u = ((x - a).dot(&d) / d.norm_squared()).clamp(0.0, 1.0);
    (a + d * u - x).norm()
}

/// The measure `μ_Γ`: one unit-weight segment per polyline edge.
pub fn measure_of(curve: &Curve) -> CurrentMeasure {
    let segments = (0..curve.num_edges())
        .map(|i| {
            let (a, b) = curve.edge(i);
            Segment::new(a, b, 1.0)
        })
        .collect();
    CurrentMeasure::new(curve.dim(), segments)
}
