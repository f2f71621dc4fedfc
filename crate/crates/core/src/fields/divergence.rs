use serde::{Deserialize, Serialize};

use super::grid::FieldGrid;
use crate::{Error, Result};

/// What the centred differences see beyond the last sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Boundary {
    Periodic,
    ZeroPadded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivergenceReport {
    pub field: FieldGrid,
    pub max_abs: f64,
    /// `h^d Σ |div_h F|`.
    pub l1: f64,
    /// `h · ‖div_h F‖₁ / ‖F‖₁`, zero for the zero field.
    pub relative: f64,
}

/// Centred-difference divergence `Σᵢ (Fᵢ(x + heᵢ) − Fᵢ(x − heᵢ)) / 2h`.
pub fn divergence(grid: &FieldGrid, boundary: Boundary) -> Result<DivergenceReport> {
    if grid.ncomp != grid.dim {
        return Err(Error::DimensionMismatch(format!(
            "divergence needs {} components, field has {}",
            grid.dim, grid.ncomp
        )));
    }
    let mut out = grid.like(1);
    let shape = grid.shape;
    let fetch = |c: usize, idx: [usize; 3], axis: usize, step: isize| -> f64 {
        let n = shape[axis] as isize;
        let mut p = idx;
        let q = idx[axis] as isize + step;
        if q < 0 || q >= n {
            match boundary {
                Boundary::ZeroPadded => return 0.0,
                Boundary::Periodic => p[axis] = q.rem_euclid(n) as usize,
            }
        } else {
            p[axis] = q as usize;
        }
        grid.value(grid.index(p[0], p[1], p[2]))[c]
    };
    for (idx, v) in out.data.iter_mut().enumerate() {
        let at = grid.unindex(idx);
        *v = (0..grid.dim)
            .map(|a| (fetch(a, at, a, 1) - fetch(a, at, a, -1)) / (2.0 * grid.h))
            .sum();
    }
    let max_abs = out.max_abs();
    let l1 = out.l1_norm();
    let mass = grid.l1_norm();
    let relative = if mass > 0.0 { grid.h * l1 / mass } else { 0.0 };
    Ok(DivergenceReport { field: out, max_abs, l1, relative })
}
