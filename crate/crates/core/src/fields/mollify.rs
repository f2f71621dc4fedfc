//! Mollified currents `μ ∗ φ` sampled on grids.
//!
//! The mollifier is the centred cubic B-spline `η` with knot spacing
//! `width/2` in each variable, so its support is `[−width, width]^d`.
//! Component `i` of a current is deposited with `η` along axis `i` and with
//! `ψ = η ∗ 𝟙_{[−h,h]}/2h` along the other axes. Since the centred difference
//! of `η` is `ψ'`, the centred-difference divergence of a closed current is
//! a total derivative along the curve and vanishes. Segments are split where
//! they cross grid planes; for widths that are even multiples of `h` the
//! integrand is then polynomial on every piece and the 6-point rule is exact.

use rayon::prelude::*;

use super::grid::FieldGrid;
use crate::geometry::{measure_of, CurrentMeasure, Curve};
use crate::quad::gauss_legendre;
use crate::{Error, Point, Result};

/// Cardinal B-spline of order `k` (degree `k − 1`) on `[0, k]`.
fn cardinal(k: usize, x: f64) -> f64 {
    if !(0.0..k as f64).contains(&x) {
        return 0.0;
    }
    if k == 1 {
        return 1.0;
    }
    let kf = k as f64;
    (x * cardinal(k - 1, x) + (kf - x) * cardinal(k - 1, x - 1.0)) / (kf - 1.0)
}

/// `∫_{−∞}^x N₄ = Σ_{j ≥ 0} N₅(x − j)`.
fn cardinal4_cumulative(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 4.0 {
        1.0
    } else {
        (0..=x.floor() as usize).map(|j| cardinal(5, x - j as f64)).sum()
    }
}

/// The one-dimensional factors of the mollifier for knot spacing `s` and
/// grid spacing `h`.
#[derive(Clone, Copy, Debug)]
pub struct Profile {
    pub s: f64,
    pub h: f64,
}

impl Profile {
    pub fn new(width: f64, h: f64) -> Self {
        Self { s: 0.5 * width, h }
    }

    /// `η(u)`, unit mass on `[−2s, 2s]`.
    pub fn eta(&self, u: f64) -> f64 {
        cardinal(4, u / self.s + 2.0) / self.s
    }

    /// `(η ∗ 𝟙_{[−h,h]}/2h)(u)`.
    pub fn psi(&self, u: f64) -> f64 {
        let c = |v: f64| cardinal4_cumulative(v / self.s + 2.0);
        (c(u + self.h) - c(u - self.h)) / (2.0 * self.h)
    }

    pub fn reach(&self) -> f64 {
        2.0 * self.s + self.h
    }
}

fn check_width(width: f64, h: f64) -> Result<()> {
    if !(width >= 2.0 * h) {
        return Err(Error::WidthTooSmall { width, min: 2.0 * h });
    }
    Ok(())
}

/// Distance from the box `[lo, hi]` to the outermost samples of `grid`,
/// required to be at least `width + 4h`.
fn check_margin(grid: &FieldGrid, lo: &Point, hi: &Point, width: f64) -> Result<()> {
    let mut margin = f64::INFINITY;
    for a in 0..grid.dim {
        let first = grid.origin[a];
        let last = first + (grid.shape[a] - 1) as f64 * grid.h;
        margin = margin.min(lo[a] - first).min(last - hi[a]);
    }
    if margin < width + 4.0 * grid.h {
        return Err(Error::SupportTooCloseToBoundary { margin });
    }
    Ok(())
}

/// A quadrature node on the current: position and `w · (b − a) dt`.
struct Node {
    y: Point,
    v: Point,
}

fn nodes_of(mu: &CurrentMeasure, grid: &FieldGrid) -> Vec<Node> {
    let rule = gauss_legendre(6);
    let mut out = Vec::new();
    for seg in &mu.segments {
        if seg.weight == 0.0 || seg.length() == 0.0 {
            continue;
        }
        let (a, b) = (seg.start, seg.end);
        let mut cuts = vec![0.0, 1.0];
        for ax in 0..grid.dim {
            let (pa, pb) = ((a[ax] - grid.origin[ax]) / grid.h, (b[ax] - grid.origin[ax]) / grid.h);
            let (lo, hi) = (pa.min(pb), pa.max(pb));
            let mut m = lo.floor() + 1.0;
            while m < hi {
                cuts.push((m - pa) / (pb - pa));
                m += 1.0;
            }
        }
        cuts.sort_by(f64::total_cmp);
        for w in cuts.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            if t1 <= t0 {
                continue;
            }
            let (half, mid) = (0.5 * (t1 - t0), 0.5 * (t0 + t1));
            for &(x, wt) in rule {
                let t = mid + half * x;
                out.push(Node { y: a + (b - a) * t, v: (b - a) * (seg.weight * wt * half) });
            }
        }
    }
    out
}

fn index_range(y: f64, origin: f64, h: f64, reach: f64, n: usize) -> (usize, usize) {
    let lo = ((y - reach - origin) / h).ceil().max(0.0) as usize;
    let hi = (((y + reach - origin) / h).floor().max(-1.0) + 1.0).min(n as f64) as usize;
    (lo, hi.max(lo))
}

/// `μ ∗ φ_width` sampled on the layout of `template`, one component per
/// axis.
pub fn current_field(mu: &CurrentMeasure, width: f64, template: &FieldGrid) -> Result<FieldGrid> {
    if mu.dim != template.dim {
        return Err(Error::DimensionMismatch(format!("measure in R^{} on a {}-d grid", mu.dim, template.dim)));
    }
    let h = template.h;
    check_width(width, h)?;
    let mut out = template.like(template.dim);
    if mu.is_empty() {
        return Ok(out);
    }
    let (lo, hi) = mu.bounding_box();
    check_margin(template, &lo, &hi, width)?;
    let prof = Profile::new(width, h);
    let reach = prof.reach();
    let nodes = nodes_of(mu, template);
    let dim = template.dim;
    let [n0, n1, n2] = template.shape;
    let mut planes: Vec<Vec<usize>> = vec![Vec::new(); n0];
    for (idx, nd) in nodes.iter().enumerate() {
        let (a, b) = index_range(nd.y[0], template.origin[0], h, reach, n0);
        for p in &mut planes[a..b] {
            p.push(idx);
        }
    }
    let origin = template.origin;
    let plane_len = n1 * n2 * dim;
    out.data.par_chunks_mut(plane_len).enumerate().for_each(|(i, plane)| {
        let xi = origin[0] + i as f64 * h;
        for &idx in &planes[i] {
            let nd = &nodes[idx];
            let (own_x, oth_x) = (prof.eta(xi - nd.y[0]), prof.psi(xi - nd.y[0]));
            let (j0, j1) = index_range(nd.y[1], origin[1], h, reach, n1);
            let ys: Vec<(f64, f64)> = (j0..j1)
                .map(|j| {
                    let u = origin[1] + j as f64 * h - nd.y[1];
                    (prof.eta(u), prof.psi(u))
                })
                .collect();
            let (k0, k1) = if dim == 3 { index_range(nd.y[2], origin[2], h, reach, n2) } else { (0, 1) };
            let zs: Vec<(f64, f64)> = (k0..k1)
                .map(|k| {
                    if dim == 3 {
                        let u = origin[2] + k as f64 * h - nd.y[2];
                        (prof.eta(u), prof.psi(u))
                    } else {
                        (1.0, 1.0)
                    }
                })
                .collect();
            for (jj, &(own_y, oth_y)) in ys.iter().enumerate() {
                let row = (j0 + jj) * n2;
                for (kk, &(own_z, oth_z)) in zs.iter().enumerate() {
                    let cell = &mut plane[(row + k0 + kk) * dim..(row + k0 + kk + 1) * dim];
                    cell[0] += nd.v[0] * own_x * oth_y * oth_z;
                    cell[1] += nd.v[1] * oth_x * own_y * oth_z;
                    if dim == 3 {
                        cell[2] += nd.v[2] * oth_x * oth_y * own_z;
                    }
                }
            }
        }
    });
    Ok(out)
}

/// The mollified loop current `γ̇ H¹⌞Γ ∗ φ_width`.
pub fn loop_current(curve: &Curve, width: f64, template: &FieldGrid) -> Result<FieldGrid> {
    current_field(&measure_of(curve), width, template)
}

/// `Σ wᵢ μ_{Γᵢ} ∗ φ_width`.
pub fn smirnov_superpose(curves: &[Curve], weights: &[f64], width: f64, template: &FieldGrid) -> Result<FieldGrid> {
    if curves.len() != weights.len() {
        return Err(Error::DimensionMismatch(format!("{} curves, {} weights", curves.len(), weights.len())));
    }
    let measures: Vec<CurrentMeasure> = curves.iter().map(measure_of).collect();
    let total = CurrentMeasure::superpose(template.dim, measures.iter().zip(weights.iter().copied()));
    current_field(&total, width, template)
}

/// The scalar `Π_a η(x_a − c_a)` with unit mass, centred on `center`.
pub fn point_mass(center: &Point, width: f64, template: &FieldGrid) -> Result<FieldGrid> {
    check_width(width, template.h)?;
    check_margin(template, center, center, width)?;
    let prof = Profile::new(width, template.h);
    let mut out = template.like(1);
    let dim = template.dim;
    out.data.par_iter_mut().enumerate().for_each(|(idx, v)| {
        let x = template.position(idx);
        *v = (0..dim).map(|a| prof.eta(x[a] - center[a])).product();
    });
    Ok(out)
}

/// Mollified point masses at the grid's central sample, one per width.
pub fn dirac_family(widths: &[f64], template: &FieldGrid) -> Result<Vec<FieldGrid>> {
    let mut center = template.origin;
    for a in 0..template.dim {
        center[a] += (template.shape[a] / 2) as f64 * template.h;
    }
    widths.iter().map(|&w| point_mass(&center, w, template)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::divergence::{divergence, Boundary};
    use crate::geometry::fixtures::{regular_polygon, trefoil};
    use crate::quad::adaptive;

    #[test]
    fn profiles_have_unit_mass() {
        let p = Profile::new(0.4, 0.05);
        let m_eta = adaptive(|u| p.eta(u), -0.4, 0.4, 1e-13, 0.0);
        let m_psi = adaptive(|u| p.psi(u), -0.45, 0.45, 1e-13, 0.0);
        assert!((m_eta - 1.0).abs() < 1e-12 && (m_psi - 1.0).abs() < 1e-12);
        // Centred difference of η equals ψ'.
        for u in [-0.31, -0.07, 0.0, 0.12, 0.33] {
            let diff = (p.eta(u + p.h) - p.eta(u - p.h)) / (2.0 * p.h);
            let eps = 1e-6;
            let dpsi = (p.psi(u + eps) - p.psi(u - eps)) / (2.0 * eps);
            assert!((diff - dpsi).abs() < 1e-6 * p.eta(0.0) / p.s, "{u}: {diff} {dpsi}");
        }
    }

    #[test]
    fn sampled_point_mass_is_normalized() {
        let g = FieldGrid::centered(3, 32, 0.1, Point::zeros(), 1).unwrap();
        for f in dirac_family(&[0.8, 0.4, 0.2], &g).unwrap() {
            assert!((f.l1_norm() - 1.0).abs() < 1e-12, "{}", f.l1_norm());
        }
    }

    #[test]
    fn circle_current_mass_and_divergence() {
        let h = 4.0 / 128.0;
        let g = FieldGrid::centered(2, 128, h, Point::zeros(), 2).unwrap();
        let f = loop_current(&regular_polygon(720, 1.0), 4.0 * h, &g).unwrap();
        let mass = f.l1_norm();
        let len = regular_polygon(720, 1.0).length();
        assert!((mass / len - 1.0).abs() < 0.02, "{mass} {len}");
        let div = divergence(&f, Boundary::ZeroPadded).unwrap();
        assert!(div.relative < 1e-12, "{}", div.relative);
    }

    #[test]
    fn trefoil_current_is_discretely_solenoidal() {
        let c = trefoil();
        let h = 0.1;
        let g = FieldGrid::centered(3, 64, h, c.centroid(), 3).unwrap();
        let f = loop_current(&c, 2.0 * h, &g).unwrap();
        let div = divergence(&f, Boundary::ZeroPadded).unwrap();
        assert!(div.relative < 1e-12, "{}", div.relative);
    }

    #[test]
    fn dilation_commutes() {
        let c = regular_polygon(200, 1.0);
        let h = 0.05;
        let g = FieldGrid::centered(3, 64, h, Point::zeros(), 3).unwrap();
        let c3 = crate::geometry::build_curve(3, c.nodes().to_vec(), true, Default::default()).unwrap();
        let a = loop_current(&c3, 4.0 * h, &g).unwrap();
        let lam = 2.5;
        let gl = FieldGrid::centered(3, 64, lam * h, Point::zeros(), 3).unwrap();
        let b = loop_current(&c3.scaled(lam), 4.0 * lam * h, &gl).unwrap();
        let scale = lam.powi(-2);
        let err = a.data.iter().zip(&b.data).map(|(x, y)| (x * scale - y).abs()).fold(0.0, f64::max);
        assert!(err <= 1e-12 * b.max_abs(), "{err}");
    }

    #[test]
    fn opposite_circles_cancel() {
        let h = 0.05;
        let g = FieldGrid::centered(2, 64, h, Point::zeros(), 2).unwrap();
        let c = regular_polygon(100, 1.0);
        let f = smirnov_superpose(&[c.clone(), c.reversed()], &[1.0, 1.0], 4.0 * h, &g).unwrap();
        assert!(f.max_abs() < 1e-12);
    }

    #[test]
    fn width_and_margin_errors() {
        let g = FieldGrid::centered(2, 32, 0.1, Point::zeros(), 2).unwrap();
        let c = regular_polygon(50, 0.5);
        assert!(matches!(loop_current(&c, 0.1, &g), Err(Error::WidthTooSmall { .. })));
        assert!(matches!(
            loop_current(&regular_polygon(50, 1.2), 0.2, &g),
            Err(Error::SupportTooCloseToBoundary { .. })
        ));
    }
}
