//! Desk-scale form of `|||I_α μ_Γ||| ≲ |Γ|` for a curve and its surgery
//! pieces, with `|||f||| = ∫₀^∞ |{|f| > s}|^{(d−α)/d} ds` evaluated on a
//! sampled grid.

use serde::{Deserialize, Serialize};

use super::riesz::riesz_direct_grid;
use crate::fields::FieldGrid;
use crate::geometry::{measure_of, Curve};
use crate::lorentz::{rearrange, split_layercake};
use crate::{Error, Point, Result};

/// Sampling box: `cells` per axis over a cube of side `box_diameters · diam`
/// centred on the curve's bounding box. Samples sit at cell centres, half a
/// cell off the box centre, so symmetric curves do not pass through them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioGrid {
    pub cells: usize,
    pub box_diameters: f64,
}

impl RatioGrid {
    pub fn template(&self, curve: &Curve) -> Result<FieldGrid> {
        if !(self.box_diameters > 0.0) {
            return Err(Error::InvalidArgument(format!("box of {} diameters", self.box_diameters)));
        }
        let (lo, hi) = curve.bounding_box();
        let h = self.box_diameters * curve.diameter() / self.cells as f64;
        let mut shift = Point::repeat(0.5 * h);
        if curve.dim() == 2 {
            shift.z = 0.0;
        }
        FieldGrid::centered(curve.dim(), self.cells, h, (lo + hi) * 0.5 + shift, curve.dim())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerCakeSplit {
    /// `∫₀^{s_cut}`.
    pub low: f64,
    /// `∫_{s_cut}^∞`.
    pub high: f64,
}

impl LayerCakeSplit {
    pub fn total(&self) -> f64 {
        self.low + self.high
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityRatio {
    pub alpha: f64,
    pub dim: usize,
    pub length: f64,
    pub s_cut: f64,
    /// `|||I_α μ_Γ|||` for the whole curve.
    pub whole: LayerCakeSplit,
    /// `|||I_α μ_k|||` per piece.
    pub pieces: Vec<LayerCakeSplit>,
    /// `Σ_k |||I_α μ_k||| / |Γ|`.
    pub ratio: f64,
    /// `|||I_α μ_Γ||| / |Γ|`.
    pub whole_ratio: f64,
}

fn layer_cake(curve: &Curve, alpha: f64, template: &FieldGrid, s_cut: f64) -> Result<LayerCakeSplit> {
    let field = riesz_direct_grid(&measure_of(curve), alpha, template)?;
    let theta = (curve.dim() as f64 - alpha) / curve.dim() as f64;
    let (low, high) = split_layercake(&rearrange(&field), theta, s_cut)?;
    Ok(LayerCakeSplit { low, high })
}

/// Layer-cake functionals of `I_α` of the curve and of each piece, all
/// sampled on the grid laid out around `curve`, against `|Γ|`.
pub fn inequality_ratio(curve: &Curve, pieces: &[Curve], alpha: f64, grid: &RatioGrid, s_cut: f64) -> Result<InequalityRatio> {
    let template = grid.template(curve)?;
    let whole = layer_cake(curve, alpha, &template, s_cut)?;
    let parts: Vec<LayerCakeSplit> = pieces.iter().map(|p| layer_cake(p, alpha, &template, s_cut)).collect::<Result<_>>()?;
    let length = curve.length();
    let sum: f64 = parts.iter().map(LayerCakeSplit::total).sum();
    Ok(InequalityRatio {
        alpha,
        dim: curve.dim(),
        length,
        s_cut,
        ratio: sum / length,
        whole_ratio: whole.total() / length,
        whole,
        pieces: parts,
    })
}
