//! Brute-force checks of the ball-growth bounds behind the decomposition:
//! bi-Lipschitz curves, curves with small tangent oscillation, and the two
//! kinds of cut-off pieces.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::ball_growth::{ball_growth_constant, BallGrowthSampling};
use super::decompose::{surgery_decompose, CutKind, SurgeryConfig};
use super::delta::find_delta;
use super::pairs::ceil_inv;
use super::verify::CheckResult;
use crate::geometry::fixtures::{corner_packed_with, peanut, random_star, regular_polygon, stadium};
use crate::geometry::{measure_of, Curve};
use crate::{Error, Point, Result};

/// `inf |γ(s) − γ(t)| / d_Γ(s, t)` over nodes and edge midpoints, with `d_Γ`
/// the circle distance on closed curves.
pub fn bilipschitz_constant(curve: &Curve) -> f64 {
    let n = curve.num_edges();
    let total = curve.length();
    let mut samples: Vec<(f64, Point)> = Vec::with_capacity(2 * n + 1);
    for i in 0..n {
        let s = curve.node_param(i);
        let (a, b) = curve.edge(i);
        samples.push((s, a));
        samples.push((s + 0.5 * curve.edge_length(i), (a + b) * 0.5));
    }
    if !curve.is_closed() {
        samples.push((total, *curve.nodes().last().expect("curve has nodes")));
    }
    let closed = curve.is_closed();
    (0..samples.len())
        .into_par_iter()
        .map(|i| {
            let (s, x) = samples[i];
            samples[i + 1..].iter().fold(f64::INFINITY, |m, (t, y)| {
                let d = if closed { (t - s).min(total - (t - s)) } else { t - s };
                m.min((x - y).norm() / d)
            })
        })
        .reduce(|| f64::INFINITY, f64::min)
}

fn growth(curve: &Curve, sampling: &BallGrowthSampling) -> Result<f64> {
    Ok(ball_growth_constant(&measure_of(curve), sampling)?.lower)
}

/// Ball growth of a bi-Lipschitz curve against `4/ε₀`.
pub fn check_bilipschitz_growth(curve: &Curve, sampling: &BallGrowthSampling) -> Result<CheckResult> {
    let eps0 = bilipschitz_constant(curve);
    Ok(CheckResult::at_most(growth(curve, sampling)?, 4.0 / eps0))
}

/// Ball growth of a corner-free curve against `8 ⌈L/δ⌉`, with `δ` the
/// largest scale at which tangents oscillate by at most 1/3.
pub fn check_oscillation_growth(curve: &Curve, sampling: &BallGrowthSampling) -> Result<CheckResult> {
    if !curve.corners().is_empty() {
        return Err(Error::InvalidArgument("curve has registered corners".into()));
    }
    let delta = find_delta(curve, 1.0 / 3.0)?;
    let bound = 8.0 * (curve.length() / delta).ceil();
    Ok(CheckResult::at_most(growth(curve, sampling)?, bound))
}

/// Pieces of kind `kind` cut from `curve` at `epsilon`.
pub fn pieces_of_kind(curve: &Curve, epsilon: f64, kind: CutKind) -> Result<Vec<Curve>> {
    let mut cfg = SurgeryConfig::new(epsilon);
    cfg.certify = false;
    let report = surgery_decompose(curve, &cfg)?;
    Ok(report
        .records
        .iter()
        .filter(|r| r.kind == kind)
        .map(|r| report.pieces[r.piece_index].clone())
        .collect())
}

/// Every Type I piece against `5/ε`. No Type I cut at all is an error.
pub fn check_type_one_pieces(curve: &Curve, epsilon: f64, sampling: &BallGrowthSampling) -> Result<Vec<CheckResult>> {
    check_pieces(curve, epsilon, CutKind::TypeI, 5.0 / epsilon, sampling)
}

/// Every Type II piece against `50 ⌈ε⁻¹⌉`. No Type II cut is an error.
pub fn check_type_two_pieces(curve: &Curve, epsilon: f64, sampling: &BallGrowthSampling) -> Result<Vec<CheckResult>> {
    check_pieces(curve, epsilon, CutKind::TypeII, 50.0 * ceil_inv(epsilon) as f64, sampling)
}

fn check_pieces(
    curve: &Curve,
    epsilon: f64,
    kind: CutKind,
    bound: f64,
    sampling: &BallGrowthSampling,
) -> Result<Vec<CheckResult>> {
    let pieces = pieces_of_kind(curve, epsilon, kind)?;
    if pieces.is_empty() {
        return Err(Error::InvalidArgument(format!("no {kind:?} cut at ε = {epsilon}")));
    }
    pieces
        .iter()
        .map(|p| Ok(CheckResult::at_most(growth(p, sampling)?, bound)))
        .collect()
}

/// Random bi-Lipschitz instances: closed star-shaped loops, open sub-arcs
/// of them, and coarse regular polygons.
pub fn bilipschitz_instances(count: usize, seed: u64) -> Vec<(String, Curve)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| match i % 3 {
            0 => {
                let s = rng.gen();
                (format!("star-{s:x}"), random_star(s, rng.gen_range(2..8), rng.gen_range(0.05..0.4)))
            }
            1 => {
                let s = rng.gen();
                let star = random_star(s, rng.gen_range(2..8), rng.gen_range(0.05..0.4));
                let start = rng.gen_range(0.0..star.length());
                let len = rng.gen_range(0.2..0.9) * star.length();
                (format!("arc-{s:x}"), star.sub_arc(start, len).expect("arc lies inside the loop"))
            }
            _ => {
                let n = rng.gen_range(3..40);
                (format!("polygon-{n}"), regular_polygon(n, rng.gen_range(0.1..3.0)))
            }
        })
        .collect()
}

/// Random corner-free instances with moderate curvature, closed and open.
pub fn oscillation_instances(count: usize, seed: u64) -> Vec<(String, Curve)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let s = rng.gen();
            let star = random_star(s, rng.gen_range(2..10), rng.gen_range(0.1..0.6));
            if i % 2 == 0 {
                (format!("star-{s:x}"), star)
            } else {
                let start = rng.gen_range(0.0..star.length());
                let len = rng.gen_range(0.3..0.95) * star.length();
                (format!("arc-{s:x}"), star.sub_arc(start, len).expect("arc lies inside the loop"))
            }
        })
        .collect()
}

/// Random curves that force Type I cuts: pinched peanuts and hairpins,
/// each with its `ε`.
pub fn type_one_instances(count: usize, seed: u64) -> Vec<(String, Curve, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let eps = rng.gen_range(0.02..0.099);
            if i % 2 == 0 {
                let w = rng.gen_range(0.01..0.04);
                (format!("peanut-{w:.4}"), peanut(w), eps)
            } else {
                let r = rng.gen_range(0.01..0.03);
                let straight = rng.gen_range(1.0..2.0);
                (format!("hairpin-{straight:.3}-{r:.4}"), stadium(straight, r), eps)
            }
        })
        .collect()
}

/// Random corner-packed circles that force Type II cuts, each with its `ε`.
pub fn type_two_instances(count: usize, seed: u64) -> Vec<(String, Curve, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let eps = rng.gen_range(0.03..0.099);
            let segments = 2 * ((ceil_inv(eps) + 2 + rng.gen_range(0..12)) / 2);
            let half_angle = rng.gen_range(0.03..0.05);
            let length = rng.gen_range(0.11..0.2);
            (
                format!("zigzag-{segments}-{half_angle:.4}-{length:.3}"),
                corner_packed_with(segments, length, half_angle),
                eps,
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Segment;
    use crate::geometry::{build_curve, CurrentMeasure};

    #[test]
    fn polygon_bilipschitz_constant() {
        // Antipodal edge midpoints of an even polygon are closest in ratio.
        for n in [4usize, 10, 64] {
            let c = regular_polygon(n, 1.3);
            let exact = 2.0 / (n as f64 * (std::f64::consts::PI / n as f64).tan());
            let got = bilipschitz_constant(&c);
            assert!((got - exact).abs() < 1e-9 * exact, "{n}: {got} vs {exact}");
        }
    }

    #[test]
    fn straight_segment_is_isometric() {
        let c = build_curve(
            2,
            vec![Point::zeros(), Point::new(0.5, 0.0, 0.0), Point::new(1.0, 0.0, 0.0)],
            false,
            Default::default(),
        )
        .unwrap();
        assert!((bilipschitz_constant(&c) - 1.0).abs() < 1e-15);
        let r = check_bilipschitz_growth(&c, &BallGrowthSampling::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9 && r.passed);
    }

    #[test]
    fn oscillation_check_rejects_corners() {
        let c = corner_packed_with(22, 0.15, 0.04);
        assert!(check_oscillation_growth(&c, &BallGrowthSampling::default()).is_err());
    }

    #[test]
    fn parallel_strands_double_the_constant() {
        let m = CurrentMeasure::new(
            2,
            vec![
                Segment::new(Point::zeros(), Point::new(1.0, 0.0, 0.0), 1.0),
                Segment::new(Point::new(1.0, 1e-3, 0.0), Point::new(0.0, 1e-3, 0.0), 1.0),
            ],
        );
        let est = ball_growth_constant(&m, &BallGrowthSampling::default()).unwrap();
        assert!((est.lower - 4.0).abs() < 0.02, "{}", est.lower);
    }

    #[test]
    fn instance_generators_are_deterministic() {
        let a = type_two_instances(3, 9);
        let b = type_two_instances(3, 9);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.0, y.0);
            assert_eq!(x.1.nodes(), y.1.nodes());
        }
    }

    #[test]
    fn type_two_pieces_on_packed_zigzag() {
        let (_, c, eps) = &type_two_instances(1, 4)[0];
        let checks = check_type_two_pieces(c, *eps, &BallGrowthSampling::default()).unwrap();
        assert!(checks.iter().all(|r| r.passed), "{checks:?}");
    }
}
