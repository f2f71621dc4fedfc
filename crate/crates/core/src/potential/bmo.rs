//! Mean oscillation over grid-aligned cubes: a lower bound for the BMO
//! seminorm of a sampled field.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fields::FieldGrid;
use crate::{Error, Result};

/// Dyadic cube sides `finest · 2^k` (in cells) for `k < scales`. At each
/// side `s` the cubes start at every multiple of `max(s/4, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubeLadder {
    pub finest: usize,
    pub scales: usize,
}

impl Default for CubeLadder {
    fn default() -> Self {
        Self { finest: 4, scales: 5 }
    }
}

pub const MIN_CUBE_CELLS: usize = 4;
pub const MIN_SCALES: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BmoScale {
    pub side_cells: usize,
    pub side: f64,
    pub cubes: usize,
    pub max_oscillation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BmoEstimate {
    pub value: f64,
    pub scales: Vec<BmoScale>,
}

/// `max_Q (1/|Q|) Σ_Q |f − f_Q|` over the cubes of `ladder`, with `|·|` the
/// Euclidean norm for vector fields.
pub fn bmo_estimate(grid: &FieldGrid, ladder: &CubeLadder) -> Result<BmoEstimate> {
    if ladder.finest < MIN_CUBE_CELLS {
        return Err(Error::GridTooCoarse(format!(
            "finest cube has {} cells per side, need {MIN_CUBE_CELLS}",
            ladder.finest
        )));
    }
    if ladder.scales < MIN_SCALES {
        return Err(Error::InvalidArgument(format!("{} cube scales, need {MIN_SCALES}", ladder.scales)));
    }
    let n_min = grid.shape[..grid.dim].iter().copied().min().expect("grid has axes");
    let coarsest = ladder.finest << (ladder.scales - 1);
    if coarsest > n_min {
        return Err(Error::GridTooCoarse(format!("coarsest cube of {coarsest} cells exceeds the {n_min}-cell axis")));
    }
    let scales: Vec<BmoScale> = (0..ladder.scales)
        .map(|k| {
            let side = ladder.finest << k;
            let (cubes, max_oscillation) = scale_oscillation(grid, side);
            BmoScale { side_cells: side, side: side as f64 * grid.h, cubes, max_oscillation }
        })
        .collect();
    let value = scales.iter().map(|s| s.max_oscillation).fold(0.0, f64::max);
    Ok(BmoEstimate { value, scales })
}

fn scale_oscillation(grid: &FieldGrid, side: usize) -> (usize, f64) {
    let stride = (side / 4).max(1);
    let starts = |axis: usize| -> Vec<usize> {
        if axis >= grid.dim {
            vec![0]
        } else {
            (0..=grid.shape[axis] - side).step_by(stride).collect()
        }
    };
    let (si, sj, sk) = (starts(0), starts(1), starts(2));
    let ext = [side, side, if grid.dim == 3 { side } else { 1 }];
    let mut corners = Vec::with_capacity(si.len() * sj.len() * sk.len());
    for &i in &si {
        for &j in &sj {
            corners.extend(sk.iter().map(|&k| [i, j, k]));
        }
    }
    let osc = corners
        .par_iter()
        .map(|c| cube_oscillation(grid, c, &ext))
        .reduce(|| 0.0, f64::max);
    (corners.len(), osc)
}

fn cube_oscillation(grid: &FieldGrid, corner: &[usize; 3], ext: &[usize; 3]) -> f64 {
    let nc = grid.ncomp;
    let cells = ext.iter().product::<usize>() as f64;
    let each = |f: &mut dyn FnMut(&[f64])| {
        for i in corner[0]..corner[0] + ext[0] {
            for j in corner[1]..corner[1] + ext[1] {
                for k in corner[2]..corner[2] + ext[2] {
                    f(grid.value(grid.index(i, j, k)));
                }
            }
        }
    };
    let mut mean = vec![0.0; nc];
    each(&mut |v| {
        for (m, x) in mean.iter_mut().zip(v) {
            *m += x;
        }
    });
    for m in &mut mean {
        *m /= cells;
    }
    let mut total = 0.0;
    each(&mut |v| {
        total += v.iter().zip(&mean).map(|(x, m)| (x - m) * (x - m)).sum::<f64>().sqrt();
    });
    total / cells
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures::regular_polygon;
    use crate::geometry::measure_of;
    use crate::potential::riesz_direct_grid;
    use crate::Point;

    fn scalar_grid(n: usize, h: f64, f: impl Fn(&Point) -> f64) -> FieldGrid {
        let mut g = FieldGrid::centered(2, n, h, Point::new(0.5 * h, 0.5 * h, 0.0), 1).unwrap();
        for idx in 0..g.cells() {
            let x = g.position(idx);
            g.value_mut(idx)[0] = f(&x);
        }
        g
    }

    #[test]
    fn constant_has_no_oscillation() {
        let g = scalar_grid(64, 0.1, |_| 3.5);
        let est = bmo_estimate(&g, &CubeLadder::default()).unwrap();
        assert_eq!(est.value, 0.0);
        assert_eq!(est.scales.len(), 5);
    }

    #[test]
    fn log_is_scale_invariant() {
        // log|x| dilates to itself plus a constant, so cubes centred on the
        // origin oscillate the same amount at every scale.
        let g = scalar_grid(128, 0.05, |x| x.norm().ln());
        let est = bmo_estimate(&g, &CubeLadder::default()).unwrap();
        let osc: Vec<f64> = est.scales.iter().map(|s| s.max_oscillation).collect();
        let (lo, hi) = osc.iter().fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(*v), b.max(*v)));
        assert!(hi < 1.0 && hi / lo < 1.25, "{osc:?}");
    }

    #[test]
    fn rejects_coarse_ladders() {
        let g = scalar_grid(32, 0.1, |x| x.x);
        assert!(matches!(bmo_estimate(&g, &CubeLadder { finest: 2, scales: 5 }), Err(Error::GridTooCoarse(_))));
        assert!(matches!(bmo_estimate(&g, &CubeLadder::default()), Err(Error::GridTooCoarse(_))));
    }

    #[test]
    fn circle_potential_is_dilation_invariant() {
        // I_{d−1}μ is invariant under dilation, so grids scaled with the
        // curve see identical samples.
        let h = 0.125;
        let mut vals = Vec::new();
        for lam in [0.5, 1.0, 2.0] {
            let c = regular_polygon(256, lam);
            let c3 = crate::geometry::build_curve(3, c.nodes().to_vec(), true, Default::default()).unwrap();
            let template = FieldGrid::centered(3, 64, h * lam, Point::repeat(0.5 * h * lam), 3).unwrap();
            let field = riesz_direct_grid(&measure_of(&c3), 2.0, &template).unwrap();
            vals.push(bmo_estimate(&field, &CubeLadder::default()).unwrap().value);
        }
        let mid = vals[1];
        assert!(vals.iter().all(|v| (v / mid - 1.0).abs() < 1e-6), "{vals:?}");
    }
}
