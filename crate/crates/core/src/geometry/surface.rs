use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::curve::Curve;
use crate::{Error, Point, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    pub vertices: [Point; 3],
    pub area: f64,
}

impl Triangle {
    pub fn new(a: Point, b: Point, c: Point) -> Self {
        let area = 0.5 * (b - a).cross(&(c - a)).norm();
        Self { vertices: [a, b, c], area }
    }

    pub fn centroid(&self) -> Point {
        (self.vertices[0] + self.vertices[1] + self.vertices[2]) / 3.0
    }

    /// Longest edge.
    pub fn diameter(&self) -> f64 {
        let [a, b, c] = self.vertices;
        (a - b).norm().max((b - c).norm()).max((c - a).norm())
    }
}

/// Area measure `‖S‖` of a triangulated oriented surface.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SurfaceMeasure {
    pub dim: usize,
    pub triangles: Vec<Triangle>,
}

/// Oriented 1-chain keyed by exact endpoint bit patterns; values are net
/// multiplicities of the canonical direction.
pub type Chain = BTreeMap<([u64; 3], [u64; 3]), i64>;

fn point_key(p: &Point) -> [u64; 3] {
    // +0.0 and -0.0 describe the same point.
    [p.x + 0.0, p.y + 0.0, p.z + 0.0].map(f64::to_bits)
}

fn add_edge(chain: &mut Chain, a: &Point, b: &Point) {
    let (ka, kb) = (point_key(a), point_key(b));
    let (key, sign) = if ka <= kb { ((ka, kb), 1) } else { ((kb, ka), -1) };
    *chain.entry(key).or_insert(0) += sign;
}

fn prune(mut chain: Chain) -> Chain {
    chain.retain(|_, v| *v != 0);
    chain
}

impl SurfaceMeasure {
    pub fn total_area(&self) -> f64 {
        self.triangles.iter().map(|t| t.area).sum()
    }

    /// The boundary `∂S` with interior edges cancelled.
    pub fn boundary_chain(&self) -> Chain {
        let mut chain = Chain::new();
        for t in &self.triangles {
            let [a, b, c] = &t.vertices;
            add_edge(&mut chain, a, b);
            add_edge(&mut chain, b, c);
            add_edge(&mut chain, c, a);
        }
        prune(chain)
    }

    pub fn dilated(&self, lambda: f64) -> Self {
        let triangles = self
            .triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.vertices;
                Triangle::new(a * lambda, b * lambda, c * lambda)
            })
            .collect();
        Self { dim: self.dim, triangles }
    }
}

/// The polyline of a closed curve as a 1-chain.
pub fn curve_chain(curve: &Curve) -> Chain {
    let mut chain = Chain::new();
    for i in 0..curve.num_edges() {
        let (a, b) = curve.edge(i);
        add_edge(&mut chain, &a, &b);
    }
    prune(chain)
}

/// The cone over `apex` (default: centroid of the nodes), one triangle
/// `(apex, n_i, n_{i+1})` per edge, so that `∂S = Γ` as chains.
pub fn cone_surface(curve: &Curve, apex: Option<Point>) -> Result<SurfaceMeasure> {
    if !curve.is_closed() {
        return Err(Error::InvalidArgument("cone surface needs a closed curve".into()));
    }
    let apex = apex.unwrap_or_else(|| curve.centroid());
    if !apex.iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidArgument("apex must be finite".into()));
    }
    let triangles = (0..curve.num_edges())
        .map(|i| {
            let (a, b) = curve.edge(i);
            Triangle::new(apex, a, b)
        })
        .collect();
    Ok(SurfaceMeasure { dim: curve.dim(), triangles })
}

/// `‖S‖^{1/2} / |Γ|`, the isoperimetric ratio certified by the cone.
pub fn isoperimetric_ratio(curve: &Curve, surface: &SurfaceMeasure) -> f64 {
    surface.total_area().sqrt() / curve.length()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;
    use std::f64::consts::PI;

    fn polygon(n: usize) -> Curve {
        let nodes = (0..n)
            .map(|k| {
                let th = 2.0 * PI * k as f64 / n as f64;
                Point::new(th.cos(), th.sin(), 0.0)
            })
            .collect();
        Curve::new(2, nodes, true, BTreeSet::new()).unwrap()
    }

    #[test]
    fn disk_area() {
        let mut prev = 0.0;
        for n in [64, 256, 1024, 4096] {
            let s = cone_surface(&polygon(n), Some(Point::zeros())).unwrap();
            let a = s.total_area();
            assert!(a > prev && a < PI);
            prev = a;
        }
        assert!((PI - prev).abs() < 2e-6);
    }

    #[test]
    fn square_area_and_boundary() {
        let nodes = vec![
            Point::new(0.0, 0.0, 0.0),
            Point::new(1.0, 0.0, 0.0),
            Point::new(1.0, 1.0, 0.0),
            Point::new(0.0, 1.0, 0.0),
        ];
        let c = Curve::new(2, nodes, true, BTreeSet::new()).unwrap();
        let s = cone_surface(&c, None).unwrap();
        assert_eq!(s.total_area(), 1.0);
        assert_eq!(s.boundary_chain(), curve_chain(&c));
    }

    #[test]
    fn cone_area_bound() {
        let c = polygon(200).translated(&Point::new(0.3, 0.1, 0.0));
        let s = cone_surface(&c, None).unwrap();
        let rmax = c.nodes().iter().map(|p| (p - c.centroid()).norm()).fold(0.0, f64::max);
        assert!(s.total_area() <= 0.5 * c.length() * rmax);
        assert_eq!(s.boundary_chain(), curve_chain(&c));
    }
}
