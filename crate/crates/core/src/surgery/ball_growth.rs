use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::CurrentMeasure;
use crate::{Error, Point, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum CenterStrategy {
    /// Segment endpoints only.
    CurveNodes,
    /// A regular grid over the bounding box with `per_axis` points per axis.
    Grid { per_axis: usize },
    /// Both of the above.
    NodesAndGrid { per_axis: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallGrowthSampling {
    pub center_strategy: CenterStrategy,
    /// Smallest radius; defaults to a quarter of the shortest segment.
    pub r_min: Option<f64>,
    /// Largest radius; defaults to the bounding-box diagonal.
    pub r_max: Option<f64>,
    pub ratio: f64,
    pub refinement_rounds: usize,
}

impl Default for BallGrowthSampling {
    fn default() -> Self {
        Self {
            center_strategy: CenterStrategy::NodesAndGrid { per_axis: 0 },
            r_min: None,
            r_max: None,
            ratio: 1.1,
            refinement_rounds: 2,
        }
    }
}

impl BallGrowthSampling {
    pub fn nodes_only() -> Self {
        Self { center_strategy: CenterStrategy::CurveNodes, ..Self::default() }
    }
}

/// Bracket on `sup_{x, r} ‖μ‖(B_r(x)) / r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallGrowthEstimate {
    /// Largest ratio actually attained by a sampled ball.
    pub lower: f64,
    /// Bound valid for every center in the bounding box and every radius,
    /// available when grid centers are sampled.
    pub upper: Option<f64>,
    pub center: Point,
    pub radius: f64,
}

#[derive(Clone, Copy)]
struct Prepared {
    a: Point,
    b: Point,
    u: Point,
    len: f64,
    w: f64,
}

fn prepare(measure: &CurrentMeasure) -> Vec<Prepared> {
    measure
        .segments
        .iter()
        .filter(|s| s.weight != 0.0 && s.length() > 0.0)
        .map(|s| Prepared {
            a: s.start,
            b: s.end,
            u: s.orientation(),
            len: s.length(),
            w: s.weight.abs(),
        })
        .collect()
}

struct Geo {
    foot: f64,
    perp2: f64,
    dmin: f64,
    dmax: f64,
    len: f64,
    w: f64,
}

impl Geo {
    fn partial(&self, r: f64) -> f64 {
        if r >= self.dmax {
            return self.len * self.w;
        }
        if r < self.dmin {
            return 0.0;
        }
        let half = (r * r - self.perp2).max(0.0).sqrt();
        let lo = (self.foot - half).max(0.0);
        let hi = (self.foot + half).min(self.len);
        (hi - lo).max(0.0) * self.w
    }
}

/// `‖μ‖(B_r(c))` for ascending `radii`, plus the number of segments that
/// meet each ball.
fn mass_profile(segs: &[Prepared], c: &Point, radii: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut geos: Vec<Geo> = segs
        .iter()
        .map(|s| {
            let v = c - s.a;
            let foot = v.dot(&s.u);
            let perp2 = (v.norm_squared() - foot * foot).max(0.0);
            let da = v.norm();
            let db = (c - s.b).norm();
            let dmin = if foot <= 0.0 {
                da
            } else if foot >= s.len {
                db
            } else {
                perp2.sqrt()
            };
            Geo { foot, perp2, dmin, dmax: da.max(db), len: s.len, w: s.w }
        })
        .collect();
    geos.sort_by(|x, y| x.dmin.total_cmp(&y.dmin));
    let mut masses = Vec::with_capacity(radii.len());
    let mut counts = Vec::with_capacity(radii.len());
    let mut next = 0;
    let mut active: Vec<usize> = Vec::new();
    let mut full = 0.0;
    for &r in radii {
        while next < geos.len() && geos[next].dmin <= r {
            active.push(next);
            next += 1;
        }
        let mut partial = 0.0;
        let mut k = 0;
        while k < active.len() {
            let g = &geos[active[k]];
            if r >= g.dmax {
                full += g.len * g.w;
                active.swap_remove(k);
            } else {
                partial += g.partial(r);
                k += 1;
            }
        }
        masses.push(full + partial);
        counts.push(next);
    }
    (masses, counts)
}

/// Geometric samples of `[lo, hi]` together with every distance from `c` at
/// which the mass profile has a kink (segment endpoints and closest points).
fn trial_radii(segs: &[Prepared], c: &Point, lo: f64, hi: f64) -> Vec<f64> {
    let mut radii: Vec<f64> = (0..=16).map(|i| lo * (hi / lo).powf(i as f64 / 16.0)).collect();
    for s in segs {
        let da = (c - s.a).norm();
        let db = (c - s.b).norm();
        let foot = (c - s.a).dot(&s.u).clamp(0.0, s.len);
        let dm = (s.a + s.u * foot - c).norm();
        radii.extend([da, db, dm].into_iter().filter(|&r| r >= lo && r <= hi && r > 0.0));
    }
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    radii
}

fn ladder(r_min: f64, r_max: f64, ratio: f64) -> Vec<f64> {
    let mut radii = vec![r_min];
    while *radii.last().unwrap() < r_max {
        radii.push(radii.last().unwrap() * ratio);
    }
    radii
}

fn grid_centers(lo: &Point, hi: &Point, dim: usize, per_axis: usize) -> (Vec<Point>, f64) {
    let steps: Vec<f64> = (0..dim).map(|a| (hi[a] - lo[a]) / (per_axis - 1) as f64).collect();
    let total = per_axis.pow(dim as u32);
    let centers = (0..total)
        .map(|mut idx| {
            let mut p = Point::zeros();
            for a in 0..dim {
                p[a] = lo[a] + steps[a] * (idx % per_axis) as f64;
                idx /= per_axis;
            }
            p
        })
        .collect();
    let eta = 0.5 * steps.iter().map(|s| s * s).sum::<f64>().sqrt();
    (centers, eta)
}

struct CenterResult {
    best: f64,
    best_k: usize,
    upper: f64,
}

/// Brute-force estimate of the ball-growth constant of `measure`.
///
/// Every sampled center is evaluated on a geometric radius ladder and the
/// best few `(center, radius)` pairs are refined locally. With grid centers
/// the upper bound uses that every point of the bounding box lies within
/// `η` of a grid center, so for `r ∈ [r_k, r_{k+1}]`
/// `‖μ‖(B_r(x)) / r ≤ ‖μ‖(B_{r_{k+1}+η}(c)) / r_k`; radii below the ladder are
/// covered by `2 · #{segments meeting B_{r_0+η}(c)}` and radii above it by
/// `‖μ‖ / r_max`. Centers outside the box never do better than their
/// projection onto it.
pub fn ball_growth_constant(measure: &CurrentMeasure, sampling: &BallGrowthSampling) -> Result<BallGrowthEstimate> {
    let segs = prepare(measure);
    if segs.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    if !(sampling.ratio > 1.0) {
        return Err(Error::InvalidArgument(format!("radius ratio {} must exceed 1", sampling.ratio)));
    }
    let dim = measure.dim;
    let (lo, hi) = measure.bounding_box();
    let diag = (hi - lo).norm();
    let min_len = segs.iter().map(|s| s.len).fold(f64::INFINITY, f64::min);
    let r_min = sampling.r_min.unwrap_or(0.25 * min_len);
    let r_max = sampling.r_max.unwrap_or(diag).max(r_min);
    let radii = ladder(r_min, r_max, sampling.ratio);
    let total_mass: f64 = segs.iter().map(|s| s.len * s.w).sum();

    let mut centers: Vec<Point> = Vec::new();
    let mut eta = None;
    let per_axis_default = if dim == 2 { 25 } else { 11 };
    let add_nodes = |centers: &mut Vec<Point>| {
        for s in &segs {
            centers.push(s.a);
            centers.push(s.b);
        }
        centers.sort_by(|x, y| x.as_slice().partial_cmp(y.as_slice()).unwrap());
        centers.dedup();
    };
    match sampling.center_strategy {
        CenterStrategy::CurveNodes => add_nodes(&mut centers),
        CenterStrategy::Grid { per_axis } | CenterStrategy::NodesAndGrid { per_axis } => {
            if matches!(sampling.center_strategy, CenterStrategy::NodesAndGrid { .. }) {
                add_nodes(&mut centers);
            }
            let per_axis = if per_axis == 0 { per_axis_default } else { per_axis.max(2) };
            let (grid, e) = grid_centers(&lo, &hi, dim, per_axis);
            centers.extend(grid);
            eta = Some(e);
        }
    }
    let n_grid_start = match sampling.center_strategy {
        CenterStrategy::CurveNodes => centers.len(),
        CenterStrategy::Grid { .. } => 0,
        CenterStrategy::NodesAndGrid { per_axis } => {
            let per_axis = if per_axis == 0 { per_axis_default } else { per_axis.max(2) };
            centers.len() - per_axis.pow(dim as u32)
        }
    };

    // Query radii: the ladder itself, then (for the upper bound) the
    // inflated radii r_{k+1} + η and r_0 + η.
    let mut query: Vec<f64> = radii.clone();
    if let Some(e) = eta {
        query.push(radii[0] + e);
        query.extend(radii.iter().skip(1).map(|r| r + e));
    }
    let mut order: Vec<usize> = (0..query.len()).collect();
    order.sort_by(|&i, &j| query[i].total_cmp(&query[j]));
    let sorted: Vec<f64> = order.iter().map(|&i| query[i]).collect();
    let n_ladder = radii.len();

    let results: Vec<CenterResult> = centers
        .par_iter()
        .enumerate()
        .map(|(ci, c)| {
            let (m_sorted, n_sorted) = mass_profile(&segs, c, &sorted);
            let mut masses = vec![0.0; query.len()];
            let mut counts = vec![0usize; query.len()];
            for (pos, &qi) in order.iter().enumerate() {
                masses[qi] = m_sorted[pos];
                counts[qi] = n_sorted[pos];
            }
            let (mut best, mut best_k) = (0.0, 0);
            for k in 0..n_ladder {
                let ratio = masses[k] / radii[k];
                if ratio > best {
                    best = ratio;
                    best_k = k;
                }
            }
            let mut upper = 0.0f64;
            if eta.is_some() && ci >= n_grid_start {
                upper = 2.0 * counts[n_ladder] as f64;
                for k in 0..n_ladder - 1 {
                    upper = upper.max(masses[n_ladder + 1 + k] / radii[k]);
                }
            }
            CenterResult { best, best_k, upper }
        })
        .collect();

    let upper = eta.map(|_| {
        results
            .iter()
            .fold(total_mass / radii[n_ladder - 1], |m, r| m.max(r.upper))
    });

    let mut ranked: Vec<usize> = (0..centers.len()).collect();
    ranked.sort_by(|&i, &j| results[j].best.total_cmp(&results[i].best).then(i.cmp(&j)));
    let mut best = (results[ranked[0]].best, centers[ranked[0]], radii[results[ranked[0]].best_k]);

    let base_step = eta.map_or(min_len, |e| e.min(4.0 * min_len));
    for &ci in ranked.iter().take(4) {
        let mut center = centers[ci];
        let mut radius = radii[results[ci].best_k];
        let mut step = base_step;
        let mut spread = sampling.ratio;
        for _ in 0..sampling.refinement_rounds {
            // Node-only sampling keeps centers on the support.
            let offsets: &[f64] = match sampling.center_strategy {
                CenterStrategy::CurveNodes => &[0.0],
                _ => &[-1.0, -0.5, 0.0, 0.5, 1.0],
            };
            let n_off = offsets.len().pow(dim as u32);
            let (r_lo, r_hi) = (radius / spread, radius * spread);
            let trials: Vec<(f64, Point, f64)> = (0..n_off)
                .into_par_iter()
                .map(|mut idx| {
                    let mut c = center;
                    for a in 0..dim {
                        c[a] += offsets[idx % offsets.len()] * step;
                        idx /= offsets.len();
                    }
                    let trial_radii = trial_radii(&segs, &c, r_lo, r_hi);
                    let (m, _) = mass_profile(&segs, &c, &trial_radii);
                    let (k, v) = m
                        .iter()
                        .zip(&trial_radii)
                        .map(|(m, r)| m / r)
                        .enumerate()
                        .fold((0, 0.0), |acc, (k, v)| if v > acc.1 { (k, v) } else { acc });
                    (v, c, trial_radii[k])
                })
                .collect();
            let local = trials
                .into_iter()
                .fold((0.0, center, radius), |acc, t| if t.0 > acc.0 { t } else { acc });
            if local.0 > best.0 {
                best = local;
            }
            center = local.1;
            radius = local.2;
            step *= 0.25;
            spread = spread.sqrt();
        }
    }

    Ok(BallGrowthEstimate {
        lower: best.0,
        upper: upper.map(|u| u.max(best.0)),
        center: best.1,
        radius: best.2,
    })
}

/// `‖μ‖(B_r(c))` for a single ball.
pub fn ball_mass(measure: &CurrentMeasure, center: &Point, r: f64) -> f64 {
    mass_profile(&prepare(measure), center, &[r]).0[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures::regular_polygon;
    use crate::geometry::{measure_of, Segment};
    use std::f64::consts::PI;

    #[test]
    fn unit_circle_on_curve_centers() {
        let m = measure_of(&regular_polygon(2000, 1.0));
        let est = ball_growth_constant(&m, &BallGrowthSampling::nodes_only()).unwrap();
        assert!((est.lower - PI).abs() < 1e-3, "{}", est.lower);
        assert!(est.upper.is_none());
    }

    #[test]
    fn unit_circle_all_centers() {
        let m = measure_of(&regular_polygon(2000, 1.0));
        let est = ball_growth_constant(&m, &BallGrowthSampling::default()).unwrap();
        // Centred at the origin with r = 1 the ball holds the whole circle.
        assert!((est.lower - 2.0 * PI).abs() < 1e-3, "{}", est.lower);
        assert!(est.upper.unwrap() >= est.lower);
    }

    #[test]
    fn single_segment() {
        let m = CurrentMeasure::new(2, vec![Segment::new(Point::zeros(), Point::new(1.0, 0.0, 0.0), 1.0)]);
        let est = ball_growth_constant(&m, &BallGrowthSampling::default()).unwrap();
        assert!((est.lower - 2.0).abs() < 1e-9);
        assert!((ball_mass(&m, &Point::new(0.5, 0.0, 0.0), 0.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn parallel_strands() {
        let gap = 1e-3;
        let m = CurrentMeasure::new(
            2,
            vec![
                Segment::new(Point::zeros(), Point::new(1.0, 0.0, 0.0), 1.0),
                Segment::new(Point::new(1.0, gap, 0.0), Point::new(0.0, gap, 0.0), 1.0),
            ],
        );
        let est = ball_growth_constant(&m, &BallGrowthSampling::default()).unwrap();
        assert!(est.lower > 3.99 && est.lower <= 4.0 + 1e-9, "{}", est.lower);
    }

    #[test]
    fn empty_measure() {
        let m = CurrentMeasure::zero(2);
        assert!(matches!(
            ball_growth_constant(&m, &BallGrowthSampling::default()),
            Err(Error::EmptyMeasure)
        ));
    }

    #[test]
    fn mass_matches_direct_integration() {
        let m = measure_of(&regular_polygon(37, 1.3));
        let c = Point::new(0.4, -0.9, 0.0);
        for r in [0.1, 0.5, 1.0, 2.0, 4.0] {
            // Dense point sampling along each segment.
            let direct: f64 = m
                .segments
                .iter()
                .map(|s| {
                    let n = 20000;
                    let inside = (0..n)
                        .filter(|&i| {
                            let u = (i as f64 + 0.5) / n as f64;
                            (s.start + (s.end - s.start) * u - c).norm() <= r
                        })
                        .count();
                    s.length() * inside as f64 / n as f64
                })
                .sum();
            assert!((ball_mass(&m, &c, r) - direct).abs() < 1e-3);
        }
    }
}
