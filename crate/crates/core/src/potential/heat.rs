use libm::{erf, erfc};

use crate::geometry::{CurrentMeasure, Segment};
use crate::{Error, Point, Result};

/// `p_t(x) = (4πt)^{-d/2} exp(−|x|²/4t)`.
pub fn heat_kernel(dim: usize, x: &Point, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonpositiveTime(t));
    }
    Ok(kernel(dim, x.norm_squared(), t))
}

pub(crate) fn kernel(dim: usize, r2: f64, t: f64) -> f64 {
    (4.0 * std::f64::consts::PI * t).powf(-0.5 * dim as f64) * (-r2 / (4.0 * t)).exp()
}

/// `∇p_t(x) = −x/(2t) p_t(x)`.
pub fn heat_kernel_gradient(dim: usize, x: &Point, t: f64) -> Result<Point> {
    Ok(-x * (heat_kernel(dim, x, t)? / (2.0 * t)))
}

/// `∫_lo^hi exp(−s²) ds · 2/√π`, computed without cancellation.
fn erf_diff(lo: f64, hi: f64) -> f64 {
    if lo >= 0.5 {
        erfc(lo) - erfc(hi)
    } else if hi <= -0.5 {
        erfc(-hi) - erfc(-lo)
    } else {
        erf(hi) - erf(lo)
    }
}

/// `∫₀^ℓ p_t(x − a − s u) ds` for the segment `a → a + ℓu`.
pub(crate) fn segment_heat(dim: usize, seg: &Segment, x: &Point, t: f64) -> f64 {
    let len = seg.length();
    if len == 0.0 {
        return 0.0;
    }
    let u = (seg.end - seg.start) / len;
    let y = x - seg.start;
    let along = y.dot(&u);
    let perp2 = (y - u * along).norm_squared();
    let q = 2.0 * t.sqrt();
    let line = (4.0 * std::f64::consts::PI * t).powf(-0.5 * (dim as f64 - 1.0)) * (-perp2 / (4.0 * t)).exp();
    line * 0.5 * erf_diff(-along / q, (len - along) / q)
}

/// `(p_t ∗ μ)(x) = Σ_seg w u ∫ p_t(x − y(s)) ds`, exact per segment.
pub fn heat_convolve_measure(mu: &CurrentMeasure, x: &Point, t: f64) -> Result<Point> {
    if !(t > 0.0) {
        return Err(Error::NonpositiveTime(t));
    }
    Ok(mu.segments.iter().fold(Point::zeros(), |acc, seg| {
        let len = seg.length();
        if len == 0.0 {
            return acc;
        }
        acc + (seg.end - seg.start) * (seg.weight / len * segment_heat(mu.dim, seg, x, t))
    }))
}

/// Anything whose heat extension `p_t ∗ f` can be evaluated pointwise.
/// Scalar sources report their value in the first component.
pub trait HeatSource: Sync {
    fn dim(&self) -> usize;
    fn heat(&self, x: &Point, t: f64) -> Point;
}

impl HeatSource for CurrentMeasure {
    fn dim(&self) -> usize {
        self.dim
    }

    fn heat(&self, x: &Point, t: f64) -> Point {
        heat_convolve_measure(self, x, t).expect("positive time")
    }
}

/// The scalar `weight · p_time(· − center)`; its heat extension is
/// `weight · p_{t+time}(· − center)`.
#[derive(Clone, Debug)]
pub struct GaussianSource {
    pub dim: usize,
    pub center: Point,
    pub time: f64,
    pub weight: f64,
}

impl GaussianSource {
    pub fn new(dim: usize, time: f64) -> Self {
        Self { dim, center: Point::zeros(), time, weight: 1.0 }
    }
}

impl HeatSource for GaussianSource {
    fn dim(&self) -> usize {
        self.dim
    }

    fn heat(&self, x: &Point, t: f64) -> Point {
        Point::new(self.weight * kernel(self.dim, (x - self.center).norm_squared(), t + self.time), 0.0, 0.0)
    }
}
