use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use libm::tgamma as gamma;

use super::heat::HeatSource;
use crate::fields::FieldGrid;
use crate::geometry::{CurrentMeasure, Segment};
use crate::quad::adaptive;
use crate::{Error, Point, Result};

/// Log-uniform trapezoid rule in `u = ln t` on `[t_min, t_max]`. Beyond
/// the window the integrand is continued geometrically with the decay rate
/// of the last two nodes, so the sum approximates the whole-line trapezoid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub nodes_per_decade: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { t_min: 1e-10, t_max: 1e10, nodes_per_decade: 10 }
    }
}

impl QuadratureSpec {
    /// The default window rescaled to the time scale `scale²`.
    pub fn for_length(scale: f64) -> Self {
        let s2 = scale * scale;
        let d = Self::default();
        Self { t_min: d.t_min * s2, t_max: d.t_max * s2, ..d }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0 && self.t_min < self.t_max && self.nodes_per_decade > 0) {
            return Err(Error::InvalidArgument(format!("bad quadrature window {self:?}")));
        }
        Ok(())
    }

    fn nodes(&self) -> (f64, Vec<f64>) {
        let h = std::f64::consts::LN_10 / self.nodes_per_decade as f64;
        let span = (self.t_max / self.t_min).ln();
        let n = (span / h).ceil() as usize;
        let u0 = self.t_min.ln();
        (h, (0..=n).map(|i| (u0 + i as f64 * h).exp()).collect())
    }
}

/// `γ(α) = π^{d/2} 2^α Γ(α/2) / Γ((d−α)/2)`, so that `I_α` has kernel
/// `|x|^{α−d}/γ(α)`.
pub fn riesz_normalization(dim: usize, alpha: f64) -> f64 {
    let d = dim as f64;
    std::f64::consts::PI.powf(0.5 * d) * 2f64.powf(alpha) * gamma(0.5 * alpha) / gamma(0.5 * (d - alpha))
}

fn check_alpha(dim: usize, alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < dim as f64) {
        return Err(Error::AlphaOutOfRange { alpha, dim });
    }
    Ok(())
}

/// `(1/Γ(α/2)) ∫₀^∞ t^{α/2−1} g(t) dt`.
pub(crate) fn semigroup_integral<G: Fn(f64) -> Point>(g: G, alpha: f64, quad: &QuadratureSpec) -> Result<Point> {
    quad.validate()?;
    let (h, times) = quad.nodes();
    let f: Vec<Point> = times.iter().map(|&t| g(t) * t.powf(0.5 * alpha)).collect();
    let mut sum = f.iter().fold(Point::zeros(), |a, v| a + v);
    let peak = f.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let n = f.len() - 1;
    for (end, next) in [(n, n - 1), (0, 1)] {
        let (a, b) = (f[end].norm(), f[next].norm());
        // Below this level the tail is negligible and its rate is rounding noise.
        if a <= 1e-14 * peak {
            continue;
        }
        // Decay rate per step towards the outside of the window.
        let q = a / b;
        if !(q < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "integrand does not decay at t = {:e}; widen the quadrature window",
                times[end]
            )));
        }
        sum += f[end] * (q / (1.0 - q));
    }
    Ok(sum * (h / gamma(0.5 * alpha)))
}

/// `I_α f(x)` through the heat semigroup.
pub fn riesz_semigroup<S: HeatSource + ?Sized>(src: &S, alpha: f64, x: &Point, quad: &QuadratureSpec) -> Result<Point> {
    check_alpha(src.dim(), alpha)?;
    semigroup_integral(|t| src.heat(x, t), alpha, quad)
}

/// `I_β f` as a heat source, using `p_t ∗ I_β f = I_β (p_t ∗ f)`.
pub struct RieszOfSource<'a, S: HeatSource + ?Sized> {
    pub inner: &'a S,
    pub beta: f64,
    pub quad: QuadratureSpec,
}

impl<S: HeatSource + ?Sized> HeatSource for RieszOfSource<'_, S> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn heat(&self, x: &Point, t: f64) -> Point {
        semigroup_integral(|s| self.inner.heat(x, t + s), self.beta, &self.quad).expect("inner source decays")
    }
}

/// `∫_a^b |v|^p dv` for `a, b` of the same sign.
fn power_integral(a: f64, b: f64, p: f64) -> f64 {
    let (lo, hi) = if a >= 0.0 { (a, b) } else { (-b, -a) };
    if p == -1.0 {
        (hi / lo).ln()
    } else {
        (hi.powf(p + 1.0) - lo.powf(p + 1.0)) / (p + 1.0)
    }
}

/// `asinh(b) − asinh(a)` without cancellation when `a ≈ b`.
fn asinh_diff(a: f64, b: f64) -> f64 {
    if a >= 0.0 && b >= 0.0 {
        ((b - a) * (b + a) / (b * (1.0 + a * a).sqrt() + a * (1.0 + b * b).sqrt())).asinh()
    } else if a <= 0.0 && b <= 0.0 {
        asinh_diff(-b, -a)
    } else {
        b.asinh() - a.asinh()
    }
}

/// `∫₀^ℓ |x − a − s u|^p ds` for one segment.
fn segment_power(seg: &Segment, x: &Point, p: f64) -> Result<f64> {
    let len = seg.length();
    let u = (seg.end - seg.start) / len;
    let y = x - seg.start;
    let along = y.dot(&u);
    let perp = (y - u * along).norm();
    let (a, b) = (-along, len - along);
    if perp <= 1e-14 * (len + y.norm()) {
        if a < 0.0 && b > 0.0 || a == 0.0 || b == 0.0 {
            return Err(Error::PointOnSupport);
        }
        return Ok(power_integral(a, b, p));
    }
    let (a, b) = (a / perp, b / perp);
    // s − along = perp · sinh v turns the kernel into perp^{p+1} cosh^{p+1} v.
    let body = if p == -1.0 {
        asinh_diff(a, b)
    } else {
        let (v0, v1) = (a.asinh(), b.asinh());
        adaptive(|v| v.cosh().powf(p + 1.0), v0, v1, 1e-13, 0.0)
    };
    Ok(perp.powf(p + 1.0) * body)
}

/// `I_α μ(x) = (1/γ(α)) ∫ |x − y|^{α−d} dμ(y)` by per-segment quadrature.
pub fn riesz_direct(mu: &CurrentMeasure, alpha: f64, x: &Point) -> Result<Point> {
    check_alpha(mu.dim, alpha)?;
    let p = alpha - mu.dim as f64;
    let mut acc = Point::zeros();
    for seg in &mu.segments {
        let len = seg.length();
        if len == 0.0 || seg.weight == 0.0 {
            continue;
        }
        acc += (seg.end - seg.start) * (seg.weight / len * segment_power(seg, x, p)?);
    }
    Ok(acc / riesz_normalization(mu.dim, alpha))
}

/// [`riesz_direct`] at many points in parallel.
pub fn riesz_direct_many(mu: &CurrentMeasure, alpha: f64, points: &[Point]) -> Result<Vec<Point>> {
    points.par_iter().map(|x| riesz_direct(mu, alpha, x)).collect()
}

/// `I_α μ` sampled at the nodes of `template` (a vector grid). Nodes lying
/// exactly on the support are nudged by `10⁻⁹ h`.
pub fn riesz_direct_grid(mu: &CurrentMeasure, alpha: f64, template: &FieldGrid) -> Result<FieldGrid> {
    check_alpha(mu.dim, alpha)?;
    let mut out = template.like(mu.dim);
    let nudge = Point::new(1.0, 1.0, if mu.dim == 3 { 1.0 } else { 0.0 }) * (1e-9 * template.h);
    let values: Vec<Point> = (0..out.cells())
        .into_par_iter()
        .map(|idx| {
            let x = template.position(idx);
            match riesz_direct(mu, alpha, &x) {
                Err(Error::PointOnSupport) => riesz_direct(mu, alpha, &(x + nudge)),
                r => r,
            }
        })
        .collect::<Result<_>>()?;
    for (idx, v) in values.iter().enumerate() {
        out.value_mut(idx).copy_from_slice(&v.as_slice()[..mu.dim]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures::{random_star, regular_polygon, trefoil};
    use crate::geometry::measure_of;
    use crate::potential::heat::GaussianSource;
    use libm::tgamma as gamma;

    /// `I_α p_1(0) = (4π)^{-d/2} Γ((d−α)/2)/Γ(d/2)` from the Beta integral.
    fn gaussian_oracle(d: usize, alpha: f64) -> f64 {
        let d = d as f64;
        (4.0 * std::f64::consts::PI).powf(-0.5 * d) * gamma(0.5 * (d - alpha)) / gamma(0.5 * d)
    }

    #[test]
    fn gaussian_closed_form() {
        let q = QuadratureSpec::default();
        for (d, alphas) in [(2usize, vec![0.25, 0.5, 0.75, 1.0, 1.5]), (3, vec![0.25, 0.5, 0.75, 1.5, 2.0, 2.5])] {
            let src = GaussianSource::new(d, 1.0);
            for a in alphas {
                let got = riesz_semigroup(&src, a, &Point::zeros(), &q).unwrap().x;
                let want = gaussian_oracle(d, a);
                assert!((got / want - 1.0).abs() < 1e-10, "d={d} α={a}: {got} vs {want}");
            }
        }
        let two = gaussian_oracle(3, 2.0);
        assert!((two - 2.0 * (4.0 * std::f64::consts::PI).powf(-1.5)).abs() < 1e-15);
    }

    #[test]
    fn semigroup_property() {
        let q = QuadratureSpec { nodes_per_decade: 6, ..QuadratureSpec::default() };
        let src = GaussianSource::new(3, 1.0);
        let x = Point::new(0.3, -0.2, 0.5);
        let (a, b) = (0.5, 0.75);
        let inner = RieszOfSource { inner: &src, beta: b, quad: q };
        let composed = riesz_semigroup(&inner, a, &x, &q).unwrap().x;
        let direct = riesz_semigroup(&src, a + b, &x, &q).unwrap().x;
        assert!((composed / direct - 1.0).abs() < 1e-6, "{composed} {direct}");
    }

    #[test]
    fn direct_matches_semigroup_on_curves() {
        let q = QuadratureSpec::default();
        let cases = [(measure_of(&random_star(5, 4, 0.3)), vec![0.25, 0.5, 0.75]), (measure_of(&trefoil()), vec![0.5, 1.5])];
        for (m, alphas) in cases {
            for a in alphas {
                for x in [Point::new(0.2, 0.1, 0.3), Point::new(1.7, -0.4, 0.1), Point::new(-0.3, 1.2, -0.5)] {
                    let x = if m.dim == 2 { Point::new(x.x, x.y, 0.0) } else { x };
                    let d = riesz_direct(&m, a, &x).unwrap();
                    let s = riesz_semigroup(&m, a, &x, &q).unwrap();
                    assert!((d - s).norm() <= 1e-7 * d.norm(), "α={a} {x:?}: {d:?} {s:?}");
                }
            }
        }
    }

    #[test]
    fn dilation_law() {
        let m = measure_of(&random_star(11, 5, 0.4));
        let x = Point::new(0.4, -1.6, 0.0);
        for a in [0.25, 0.5, 1.5] {
            for lam in [0.5, 3.0] {
                let big = riesz_direct(&m.dilated(lam), a, &(x * lam)).unwrap();
                let small = riesz_direct(&m, a, &x).unwrap() * lam.powf(1.0 + a - 2.0);
                assert!((big - small).norm() <= 1e-12 * small.norm());
            }
        }
    }

    #[test]
    fn errors() {
        let m = measure_of(&regular_polygon(16, 1.0));
        assert!(matches!(riesz_direct(&m, 2.0, &Point::zeros()), Err(Error::AlphaOutOfRange { .. })));
        assert!(matches!(riesz_direct(&m, 0.0, &Point::zeros()), Err(Error::AlphaOutOfRange { .. })));
        let on = m.segments[3].start * 0.5 + m.segments[3].end * 0.5;
        assert!(matches!(riesz_direct(&m, 0.5, &on), Err(Error::PointOnSupport)));
        assert!(matches!(riesz_direct(&m, 0.5, &m.segments[3].start), Err(Error::PointOnSupport)));
    }

    #[test]
    fn segment_integrals_against_quadrature() {
        let seg = Segment::new(Point::new(-0.2, 0.1, 0.0), Point::new(0.7, 0.5, 0.3), 1.0);
        let u = (seg.end - seg.start) / seg.length();
        for p in [-2.75, -2.0, -1.0, -0.5] {
            for x in [Point::new(0.2, 0.35, 0.16), Point::new(3.0, 0.0, 0.0), Point::new(0.25, 0.3, 0.151)] {
                let oracle = adaptive(|s| (x - seg.start - u * s).norm().powf(p), 0.0, seg.length(), 1e-13, 0.0);
                let got = segment_power(&seg, &x, p).unwrap();
                assert!((got - oracle).abs() <= 1e-10 * oracle, "p={p}: {got} {oracle}");
            }
        }
        // Collinear, off the segment.
        let x = seg.start - u * 0.5;
        let want = ((0.5f64).powf(-0.5) - (0.5 + seg.length()).powf(-0.5)) / 0.5;
        assert!((segment_power(&seg, &x, -1.5).unwrap() - want).abs() < 1e-13);
    }

    #[test]
    fn closed_loop_far_field_decays_faster() {
        // A closed loop is a dipole: |I_α μ| falls like R^{α−d−1}.
        let m = measure_of(&random_star(2, 3, 0.2));
        let a = 0.5;
        let dir = Point::new(0.6, 0.8, 0.0);
        let v: Vec<f64> = [10.0, 20.0, 40.0].iter().map(|r| riesz_direct(&m, a, &(dir * *r)).unwrap().norm()).collect();
        for w in v.windows(2) {
            let rate = (w[0] / w[1]).log2();
            assert!((rate - (2.0 + 1.0 - a)).abs() < 0.1, "{rate}");
        }
    }

    #[test]
    fn normalization_values() {
        // d = 3, α = 2: the Newtonian kernel 1/(4π|x|).
        assert!((riesz_normalization(3, 2.0) - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        // d = 2, α = 1: 1/(2π|x|).
        assert!((riesz_normalization(2, 1.0) - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }
}
