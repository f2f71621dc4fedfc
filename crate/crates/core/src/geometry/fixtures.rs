//! Test curves: circles, stadiums, a tightly wound spiral loop, a folded
//! hairpin, a pinched peanut, a trefoil knot, a corner-packed circle and
//! random star-shaped loops.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::curve::{Curve, DEFAULT_SAMPLES_PER_UNIT};
use crate::Point;

fn default_spacing() -> f64 {
    1.0 / DEFAULT_SAMPLES_PER_UNIT
}

/// Resamples a densely sampled closed polyline at uniform arclength steps of
/// at most `spacing`.
pub fn resample_closed(dim: usize, dense: &[Point], spacing: f64) -> Curve {
    let m = dense.len();
    let mut cum = Vec::with_capacity(m + 1);
    cum.push(0.0);
    for i in 0..m {
        let d = (dense[(i + 1) % m] - dense[i]).norm();
        cum.push(cum[i] + d);
    }
    let total = cum[m];
    let n = ((total / spacing).ceil() as usize).max(8);
    let step = total / n as f64;
    let mut nodes = Vec::with_capacity(n);
    let mut e = 0;
    for k in 0..n {
        let s = k as f64 * step;
        while cum[e + 1] < s {
            e += 1;
        }
        let (a, b) = (dense[e], dense[(e + 1) % m]);
        let frac = (s - cum[e]) / (cum[e + 1] - cum[e]);
        nodes.push(a + (b - a) * frac);
    }
    Curve::new(dim, nodes, true, BTreeSet::new())
        .expect("resampled fixture is nondegenerate")
        .with_samples_per_unit(1.0 / spacing)
}

/// Samples `f` on `[0, 1)` densely and resamples by arclength.
pub fn from_parametric<F: Fn(f64) -> Point>(dim: usize, f: F, dense: usize, spacing: f64) -> Curve {
    let pts: Vec<Point> = (0..dense).map(|i| f(i as f64 / dense as f64)).collect();
    resample_closed(dim, &pts, spacing)
}

/// Inscribed regular `n`-gon of the circle of radius `radius`.
pub fn regular_polygon(n: usize, radius: f64) -> Curve {
    let nodes = (0..n)
        .map(|k| {
            let th = TAU * k as f64 / n as f64;
            Point::new(radius * th.cos(), radius * th.sin(), 0.0)
        })
        .collect();
    Curve::new(2, nodes, true, BTreeSet::new()).expect("regular polygon is nondegenerate")
}

/// Circle of radius `radius` sampled at the default density.
pub fn circle(radius: f64) -> Curve {
    let n = ((TAU * radius * DEFAULT_SAMPLES_PER_UNIT).ceil() as usize).max(64);
    regular_polygon(n, radius)
}

pub fn square(side: f64) -> Curve {
    let nodes = vec![
        Point::new(0.0, 0.0, 0.0),
        Point::new(side, 0.0, 0.0),
        Point::new(side, side, 0.0),
        Point::new(0.0, side, 0.0),
    ];
    Curve::new(2, nodes, true, (0..4).collect()).expect("square is nondegenerate")
}

/// Two parallel straight runs of length `straight` joined by semicircles of
/// radius `radius`, parameterized exactly by arclength.
pub fn stadium(straight: f64, radius: f64) -> Curve {
    let spacing = default_spacing().min(radius / 24.0);
    let cap = PI * radius;
    let total = 2.0 * straight + 2.0 * cap;
    let n = (total / spacing).ceil() as usize;
    let half = straight / 2.0;
    let nodes = (0..n)
        .map(|k| {
            let s = total * k as f64 / n as f64;
            if s < straight {
                Point::new(-half + s, -radius, 0.0)
            } else if s < straight + cap {
                let th = -PI / 2.0 + (s - straight) / radius;
                Point::new(half + radius * th.cos(), radius * th.sin(), 0.0)
            } else if s < 2.0 * straight + cap {
                Point::new(half - (s - straight - cap), radius, 0.0)
            } else {
                let th = PI / 2.0 + (s - 2.0 * straight - cap) / radius;
                Point::new(-half + radius * th.cos(), radius * th.sin(), 0.0)
            }
        })
        .collect();
    Curve::new(2, nodes, true, BTreeSet::new())
        .expect("stadium is nondegenerate")
        .with_samples_per_unit(1.0 / spacing)
}

/// A hairpin: a stadium whose two straight runs of length 1.5 are 0.04 apart.
pub fn folded_loop() -> Curve {
    stadium(1.5, 0.02)
}

/// Planar spiral loop: eleven turns of `r(θ)`, rising from 0.1 to 0.2 over
/// ten turns (pitch 0.01) and falling back over the last turn, with smoothed
/// turnarounds so the curve is `C¹`.
pub fn spiral() -> Curve {
    let turns = 11.0;
    let rise_frac = 10.0 / 11.0;
    let (r0, dr) = (0.1, 0.1);
    let kappa = 0.004;
    let m = 400_000;
    let logistic = |x: f64| 0.5 * (1.0 + (0.5 * x).tanh());
    let fall = |u: f64| -> f64 {
        (-1..=1)
            .map(|k| {
                let k = k as f64;
                logistic((u - rise_frac - k) / kappa) - logistic((u - 1.0 - k) / kappa)
            })
            .sum()
    };
    let (up, down) = (dr / rise_frac, dr / (1.0 - rise_frac));
    let slope: Vec<f64> = (0..=m).map(|i| up - (up + down) * fall(i as f64 / m as f64)).collect();
    let mean = slope[..m].iter().sum::<f64>() / m as f64;
    let du = 1.0 / m as f64;
    let mut r = Vec::with_capacity(m);
    let mut acc = r0;
    for i in 0..m {
        r.push(acc);
        acc += 0.5 * du * ((slope[i] - mean) + (slope[i + 1] - mean));
    }
    let pts: Vec<Point> = (0..m)
        .map(|i| {
            let th = TAU * turns * i as f64 / m as f64;
            Point::new(r[i] * th.cos(), r[i] * th.sin(), 0.0)
        })
        .collect();
    resample_closed(2, &pts, default_spacing())
}

/// A convex-ended peanut whose waist has width `waist`: the points
/// `(0, ±waist/2)` are close in space but half a loop apart in arclength.
pub fn peanut(waist: f64) -> Curve {
    let amp = 0.6;
    from_parametric(
        2,
        |u| {
            let th = TAU * u;
            Point::new(th.cos(), th.sin() * (0.5 * waist + amp * th.cos().powi(2)), 0.0)
        },
        200_000,
        default_spacing().min(waist / 8.0),
    )
}

/// Trefoil knot `(sin t + 2 sin 2t, cos t - 2 cos 2t, -sin 3t) / 4`.
pub fn trefoil() -> Curve {
    from_parametric(
        3,
        |u| {
            let t = TAU * u;
            Point::new(
                t.sin() + 2.0 * (2.0 * t).sin(),
                t.cos() - 2.0 * (2.0 * t).cos(),
                -(3.0 * t).sin(),
            ) * 0.25
        },
        200_000,
        default_spacing(),
    )
}

pub const CORNER_PACK_SEGMENTS: usize = 24;

/// Unit circle whose arc of chord ≈ 0.08 is replaced by a zigzag of
/// `CORNER_PACK_SEGMENTS` segments with total length ≈ 0.16. Every zigzag
/// vertex, including both ends, is a registered corner.
pub fn corner_packed() -> Curve {
    corner_packed_with(CORNER_PACK_SEGMENTS, 0.16, 0.04)
}

/// Unit circle with the arc `|θ| < half_angle` replaced by a zigzag of
/// `segments` equal segments of total length `zigzag_length`, which must
/// exceed the chord `2 sin(half_angle)`. `segments` must be even so the
/// zigzag ends back on the circle.
pub fn corner_packed_with(segments: usize, zigzag_length: f64, half_angle: f64) -> Curve {
    assert!(segments >= 2 && segments % 2 == 0, "zigzag needs an even segment count");
    let a = Point::new(half_angle.cos(), -half_angle.sin(), 0.0);
    let b = Point::new(half_angle.cos(), half_angle.sin(), 0.0);
    let k = segments;
    let base = (b - a).norm();
    let seg = zigzag_length / k as f64;
    let step = base / k as f64;
    let height = (seg * seg - step * step).sqrt();
    let along = (b - a) / base;
    let outward = Point::new(1.0, 0.0, 0.0);

    let mut nodes = Vec::new();
    let mut corners = BTreeSet::new();
    for j in 0..=k {
        let off = if j % 2 == 1 { height } else { 0.0 };
        corners.insert(nodes.len());
        nodes.push(a + along * (step * j as f64) + outward * off);
    }
    let spacing = default_spacing();
    let arc = TAU - 2.0 * half_angle;
    let n_arc = (arc / spacing).ceil() as usize;
    for i in 1..n_arc {
        let th = half_angle + arc * i as f64 / n_arc as f64;
        nodes.push(Point::new(th.cos(), th.sin(), 0.0));
    }
    Curve::new(2, nodes, true, corners).expect("corner-packed fixture is nondegenerate")
}

/// Star-shaped loop `r(θ) = 1 + Σ a_k cos(kθ + φ_k)` with random
/// coefficients decaying like `1/k²` and total amplitude below `amplitude`.
pub fn random_star(seed: u64, modes: usize, amplitude: f64) -> Curve {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let norm: f64 = (1..=modes).map(|k| 1.0 / (k * k) as f64).sum();
    let coeffs: Vec<(f64, f64)> = (1..=modes)
        .map(|k| {
            let a = rng.gen_range(-1.0..1.0) * amplitude / (norm * (k * k) as f64);
            (a, rng.gen_range(0.0..TAU))
        })
        .collect();
    from_parametric(
        2,
        |u| {
            let th = TAU * u;
            let r = 1.0
                + coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, (a, ph))| a * ((k + 1) as f64 * th + ph).cos())
                    .sum::<f64>();
            Point::new(r * th.cos(), r * th.sin(), 0.0)
        },
        20_000,
        default_spacing() * 2.0,
    )
}

/// The curve suite used by the surgery acceptance criterion.
pub fn surgery_suite() -> Vec<(&'static str, Curve)> {
    vec![
        ("circle", circle(1.0)),
        ("stadium", stadium(2.0, 0.5)),
        ("spiral", spiral()),
        ("folded", folded_loop()),
        ("trefoil", trefoil()),
        ("corner_packed", corner_packed()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stadium_length() {
        let c = stadium(2.0, 0.5);
        assert!((c.length() - (4.0 + PI)).abs() < 1e-4);
    }

    #[test]
    fn spiral_radii() {
        let c = spiral();
        let (rmin, rmax) = c
            .nodes()
            .iter()
            .map(|p| p.norm())
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
        assert!(rmin > 0.09 && rmin < 0.105, "rmin {rmin}");
        assert!(rmax > 0.195 && rmax < 0.21, "rmax {rmax}");
        assert!(c.length() > 9.0 && c.length() < 11.5, "length {}", c.length());
    }

    #[test]
    fn corner_pack_geometry() {
        let c = corner_packed();
        assert_eq!(c.corners().len(), CORNER_PACK_SEGMENTS + 1);
        let params = c.corner_params();
        let span = params.last().unwrap() - params.first().unwrap();
        assert!((span - 0.16).abs() < 1e-12);
        let chord = (c.nodes()[0] - c.nodes()[CORNER_PACK_SEGMENTS]).norm();
        assert!((chord - 0.08).abs() < 1e-4);
    }

    #[test]
    fn trefoil_is_spatial() {
        let c = trefoil();
        assert_eq!(c.dim(), 3);
        assert!(c.nodes().iter().any(|p| p.z.abs() > 0.2));
    }

    #[test]
    fn random_star_is_deterministic() {
        assert_eq!(random_star(7, 6, 0.3), random_star(7, 6, 0.3));
        assert_ne!(random_star(7, 6, 0.3), random_star(8, 6, 0.3));
    }
}
