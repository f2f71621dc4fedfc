use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ball_growth::BallGrowthSampling;
use super::decompose::{certify_pieces, piece_bound, SurgeryReport};
use crate::geometry::{measure_of, CurrentMeasure, Curve};
use crate::{Error, Point, Result};

/// Outcome of one check: `value` is compared against `bound` (`value ≤ bound`
/// passes) and `margin = bound − value`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub passed: bool,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
}

impl CheckResult {
    pub fn at_most(value: f64, bound: f64) -> Self {
        Self { passed: value <= bound, value, bound, margin: bound - value }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationSummary {
    /// Worst relative pairing defect over the random test fields.
    pub additivity: CheckResult,
    /// Largest per-piece ball-growth constant against `100 ⌈ε⁻¹⌉`.
    pub ball_growth: CheckResult,
    pub per_piece_ball_growth: Vec<f64>,
    /// Output length against `(1 + 20ε) L`.
    pub length: CheckResult,
    pub t1: CheckResult,
    pub t2: CheckResult,
}

impl VerificationSummary {
    pub fn all_passed(&self) -> bool {
        self.additivity.passed && self.ball_growth.passed && self.length.passed && self.t1.passed && self.t2.passed
    }
}

/// A random vector polynomial of degree at most 3 in normalized coordinates.
#[derive(Clone, Debug)]
pub struct PolyField {
    center: Point,
    scale: f64,
    dim: usize,
    exps: Vec<[u32; 3]>,
    coeffs: Vec<Point>,
}

impl PolyField {
    pub fn random(rng: &mut impl Rng, dim: usize, center: Point, scale: f64) -> Self {
        let mut exps = Vec::new();
        for a in 0..=3u32 {
            for b in 0..=3 - a {
                let max_c = if dim == 3 { 3 - a - b } else { 0 };
                for c in 0..=max_c {
                    exps.push([a, b, c]);
                }
            }
        }
        let coeffs = exps
            .iter()
            .map(|_| {
                let mut v = Point::zeros();
                for a in 0..dim {
                    v[a] = rng.gen_range(-1.0..1.0);
                }
                v
            })
            .collect();
        Self { center, scale, dim, exps, coeffs }
    }

    pub fn eval(&self, x: &Point) -> Point {
        let y = (x - self.center) / self.scale;
        let mut out = Point::zeros();
        for (e, c) in self.exps.iter().zip(&self.coeffs) {
            let m = y.x.powi(e[0] as i32) * y.y.powi(e[1] as i32) * if self.dim == 3 { y.z.powi(e[2] as i32) } else { 1.0 };
            out += c * m;
        }
        out
    }
}

/// Largest relative defect `|⟨μ, Φ⟩ − Σ_j ⟨μ_j, Φ⟩| / ∫|Φ| d‖μ‖` over
/// `n_fields` random polynomial fields.
pub fn additivity_defect(whole: &CurrentMeasure, parts: &[CurrentMeasure], n_fields: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = whole.bounding_box();
    let center = (lo + hi) * 0.5;
    let scale = (0.5 * (hi - lo).norm()).max(f64::MIN_POSITIVE);
    (0..n_fields)
        .map(|_| {
            let f = PolyField::random(&mut rng, whole.dim, center, scale);
            let lhs = whole.pair(|x| f.eval(x));
            let rhs: f64 = parts.iter().map(|m| m.pair(|x| f.eval(x))).sum();
            let norm = whole.pair_abs(|x| f.eval(x));
            (lhs - rhs).abs() / norm.max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max)
}

pub const ADDITIVITY_TOLERANCE: f64 = 1e-8;

/// Checks a surgery report against the conclusions of the decomposition
/// lemma: measure additivity, per-piece ball growth, the length budget and
/// the cut-count bounds. Failures are reported, not raised.
pub fn verify_decomposition(original: &Curve, report: &SurgeryReport, epsilon: f64) -> Result<VerificationSummary> {
    verify_with(original, report, epsilon, &BallGrowthSampling::default(), 50, 0x5eed)
}

pub fn verify_with(
    original: &Curve,
    report: &SurgeryReport,
    epsilon: f64,
    sampling: &BallGrowthSampling,
    n_fields: usize,
    seed: u64,
) -> Result<VerificationSummary> {
    if !(epsilon > 0.0 && epsilon < 0.1) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    let whole = measure_of(original);
    let parts: Vec<CurrentMeasure> = report.pieces.iter().map(measure_of).collect();
    let defect = additivity_defect(&whole, &parts, n_fields, seed);

    let per_piece: Vec<f64> = if report.ball_growth_certified.len() == report.pieces.len() {
        report.ball_growth_certified.clone()
    } else {
        certify_pieces(&report.pieces, sampling)?.into_iter().map(|e| e.lower).collect()
    };
    let worst = per_piece.iter().copied().fold(0.0, f64::max);
    let length = original.length();
    let out: f64 = report.pieces.iter().map(Curve::length).sum();
    let (t1_bound, t2_bound) = super::decompose::cut_count_bounds(length, epsilon, report.delta);
    Ok(VerificationSummary {
        additivity: CheckResult::at_most(defect, ADDITIVITY_TOLERANCE),
        ball_growth: CheckResult::at_most(worst, piece_bound(epsilon)),
        per_piece_ball_growth: per_piece,
        length: CheckResult::at_most(out, (1.0 + 20.0 * epsilon) * length),
        t1: CheckResult::at_most(report.t1 as f64, t1_bound),
        t2: CheckResult::at_most(report.t2 as f64, t2_bound),
    })
}
