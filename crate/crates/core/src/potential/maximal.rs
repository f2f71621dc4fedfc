use serde::{Deserialize, Serialize};

use super::heat::{heat_convolve_measure, kernel};
use crate::geometry::{CurrentMeasure, SurfaceMeasure, Triangle};
use crate::quad::TRIANGLE_RULE;
use crate::Point;

/// Heat times at which maximal functions are sampled.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeLadder {
    pub times: Vec<f64>,
}

impl TimeLadder {
    pub fn log_uniform(t_min: f64, t_max: f64, nodes: usize) -> Self {
        let nodes = nodes.max(2);
        let r = (t_max / t_min).ln() / (nodes - 1) as f64;
        Self { times: (0..nodes).map(|i| t_min * (r * i as f64).exp()).collect() }
    }

    /// 400 nodes on `[10⁻⁶ D², 10³ D²]`.
    pub fn for_diameter(diam: f64) -> Self {
        let d2 = diam * diam;
        Self::log_uniform(1e-6 * d2, 1e3 * d2, 400)
    }
}

/// `sup_t` of a function of heat time, sampled on a ladder and refined by
/// golden-section search around the best node. `interior` is false when the
/// best node sits at an end of the ladder, i.e. the ladder may miss the sup.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximalValue {
    pub value: f64,
    pub time: f64,
    pub interior: bool,
}

fn ladder_sup<F: Fn(f64) -> f64>(f: F, ladder: &TimeLadder) -> MaximalValue {
    let ts = &ladder.times;
    let vals: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let (k, &v) = vals
        .iter()
        .enumerate()
        .fold((0, &0.0), |acc, (i, v)| if *v > *acc.1 { (i, v) } else { acc });
    if v == 0.0 {
        return MaximalValue { value: 0.0, time: ts[0], interior: false };
    }
    let interior = k > 0 && k + 1 < ts.len();
    let mut best = (v, ts[k]);
    if interior {
        let (mut a, mut b) = (ts[k - 1].ln(), ts[k + 1].ln());
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (f(c.exp()), f(d.exp()));
        for _ in 0..40 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = f(c.exp());
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = f(d.exp());
            }
        }
        for (fv, u) in [(fc, c), (fd, d)] {
            if fv > best.0 {
                best = (fv, u.exp());
            }
        }
    }
    MaximalValue { value: best.0, time: best.1, interior }
}

/// `M₁μ(x) = sup_t |p_t ∗ μ|(x)`.
pub fn maximal_m1(mu: &CurrentMeasure, x: &Point, ladder: &TimeLadder) -> MaximalValue {
    ladder_sup(|t| heat_convolve_measure(mu, x, t).expect("positive time").norm(), ladder)
}

/// The area measure `‖S‖` pushed forward by `y ↦ |x − y|`, accumulated in
/// narrow logarithmic bins. Triangles are subdivided until they are small
/// compared with their distance to `x` (or with `floor`).
#[derive(Clone, Debug)]
pub struct AreaProfile {
    dim: usize,
    rho: Vec<f64>,
    weight: Vec<f64>,
    nearest: f64,
}

const BIN_RATIO: f64 = 1.0005;
const MAX_DEPTH: usize = 40;

impl AreaProfile {
    pub fn new(surface: &SurfaceMeasure, x: &Point, floor: f64) -> Self {
        let mut pts: Vec<(f64, f64)> = Vec::new();
        for tri in &surface.triangles {
            collect(tri, x, floor, 0, &mut pts);
        }
        let rho_min = pts.iter().map(|p| p.0).filter(|&r| r > 0.0).fold(f64::INFINITY, f64::min);
        let mut bins: std::collections::BTreeMap<i64, (f64, f64)> = Default::default();
        let lr = BIN_RATIO.ln();
        for (r, w) in pts {
            let key = if r > 0.0 { ((r / rho_min).ln() / lr).floor() as i64 } else { -1 };
            let e = bins.entry(key).or_insert((0.0, 0.0));
            e.0 += w;
            e.1 += w * r;
        }
        let (rho, weight) = bins.values().map(|&(w, wr)| (wr / w, w)).unzip();
        let nearest = if rho_min.is_finite() { rho_min } else { 0.0 };
        Self { dim: surface.dim, rho, weight, nearest }
    }

    /// Distance from `x` to the closest quadrature node.
    pub fn nearest(&self) -> f64 {
        self.nearest
    }

    /// `(|∇p_t| ∗ ‖S‖)(x)`.
    pub fn grad_heat(&self, t: f64) -> f64 {
        let cutoff = 4.0 * t * 745.0;
        self.rho
            .iter()
            .zip(&self.weight)
            .take_while(|(r, _)| *r * *r < cutoff)
            .map(|(r, w)| w * r / (2.0 * t) * kernel(self.dim, r * r, t))
            .sum()
    }
}

fn collect(tri: &Triangle, x: &Point, floor: f64, depth: usize, out: &mut Vec<(f64, f64)>) {
    let c = tri.centroid();
    let reach = tri.vertices.iter().map(|v| (v - c).norm()).fold(0.0, f64::max);
    let dist = ((x - c).norm() - reach).max(0.0);
    let [a, b, cc] = tri.vertices;
    if depth < MAX_DEPTH && tri.diameter() > 0.5 * dist.max(floor) {
        // Longest-edge bisection keeps slivers from multiplying.
        let edges = [(a, b, cc), (b, cc, a), (cc, a, b)];
        let &(p, q, r) = edges
            .iter()
            .max_by(|e, f| (e.0 - e.1).norm_squared().total_cmp(&(f.0 - f.1).norm_squared()))
            .expect("three edges");
        let m = (p + q) * 0.5;
        collect(&Triangle::new(p, m, r), x, floor, depth + 1, out);
        collect(&Triangle::new(m, q, r), x, floor, depth + 1, out);
        return;
    }
    for (bary, w) in TRIANGLE_RULE {
        let p = a * bary[0] + b * bary[1] + cc * bary[2];
        out.push(((x - p).norm(), w * tri.area));
    }
}

/// `(|∇p_t| ∗ ‖S‖)(x)` for a single time.
pub fn grad_heat_surface(surface: &SurfaceMeasure, x: &Point, t: f64, floor: f64) -> f64 {
    AreaProfile::new(surface, x, floor).grad_heat(t)
}

/// `M₂S(x) = sup_t t^{1/2} (|∇p_t| ∗ ‖S‖)(x)`. The subdivision floor is
/// `√t_min` of the ladder.
pub fn maximal_m2(surface: &SurfaceMeasure, x: &Point, ladder: &TimeLadder) -> MaximalValue {
    if surface.triangles.is_empty() {
        return MaximalValue { value: 0.0, time: ladder.times[0], interior: false };
    }
    let profile = AreaProfile::new(surface, x, ladder.times[0].sqrt());
    ladder_sup(|t| t.sqrt() * profile.grad_heat(t), ladder)
}

/// `s · |{M > s}| / mass` on a ladder of levels `s`, from samples of a
/// maximal function on cells of volume `cell_volume`.
pub fn weak_type_profile(values: &[f64], cell_volume: f64, mass: f64, levels: &[f64]) -> Vec<(f64, f64)> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    levels
        .iter()
        .map(|&s| {
            let count = sorted.partition_point(|&v| v > s);
            (s, s * count as f64 * cell_volume / mass)
        })
        .collect()
}
