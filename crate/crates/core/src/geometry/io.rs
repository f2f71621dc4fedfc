//! Curve JSON: `{"dim": 2|3, "closed": true, "nodes": [[x, y(, z)], ...], "corners": [i, ...]}`.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::curve::Curve;
use crate::{Error, Point, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveJson {
    pub dim: usize,
    pub closed: bool,
    pub nodes: Vec<Vec<f64>>,
    #[serde(default)]
    pub corners: Vec<usize>,
}

impl From<&Curve> for CurveJson {
    fn from(c: &Curve) -> Self {
        let dim = c.dim();
        Self {
            dim,
            closed: c.is_closed(),
            nodes: c.nodes().iter().map(|p| p.as_slice()[..dim].to_vec()).collect(),
            corners: c.corners().iter().copied().collect(),
        }
    }
}

impl TryFrom<CurveJson> for Curve {
    type Error = Error;

    fn try_from(j: CurveJson) -> Result<Curve> {
        let mut nodes = Vec::with_capacity(j.nodes.len());
        for (i, v) in j.nodes.iter().enumerate() {
            if v.len() != j.dim {
                return Err(Error::Format(format!("node {i} has {} coordinates, expected {}", v.len(), j.dim)));
            }
            if !v.iter().all(|x| x.is_finite()) {
                return Err(Error::Format(format!("node {i} is not finite")));
            }
            nodes.push(Point::new(v[0], v[1], if j.dim == 3 { v[2] } else { 0.0 }));
        }
        let corners: BTreeSet<usize> = j.corners.into_iter().collect();
        Curve::new(j.dim, nodes, j.closed, corners)
    }
}

pub fn curve_to_json(c: &Curve) -> String {
    serde_json::to_string(&CurveJson::from(c)).expect("curve JSON serializes")
}

pub fn curve_from_json(text: &str) -> Result<Curve> {
    let j: CurveJson = serde_json::from_str(text)?;
    Curve::try_from(j)
}

pub fn read_curve(path: &Path) -> Result<Curve> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
    curve_from_json(&text)
}

pub fn write_curve(path: &Path, c: &Curve) -> Result<()> {
    std::fs::write(path, curve_to_json(c)).map_err(|source| Error::Io { path: path.into(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let nodes = vec![
            Point::new(0.1, 1.0 / 3.0, 0.0),
            Point::new(std::f64::consts::PI, -2.5e-310, 0.0),
            Point::new(1.234_567_890_123e150, 7.0, 0.0),
        ];
        let c = Curve::new(2, nodes, true, [1].into_iter().collect()).unwrap();
        let text = curve_to_json(&c);
        let back = curve_from_json(&text).unwrap();
        assert_eq!(back, c);
        for (a, b) in c.nodes().iter().zip(back.nodes()) {
            assert_eq!(a.x.to_bits(), b.x.to_bits());
            assert_eq!(a.y.to_bits(), b.y.to_bits());
        }
        assert_eq!(curve_to_json(&back), text);
    }

    #[test]
    fn wrong_arity_rejected() {
        let text = r#"{"dim":3,"closed":true,"nodes":[[0,0],[1,0],[0,1]],"corners":[]}"#;
        assert!(matches!(curve_from_json(text), Err(Error::Format(_))));
    }
}
