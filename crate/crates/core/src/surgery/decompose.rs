use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ball_growth::{ball_growth_constant, BallGrowthEstimate, BallGrowthSampling};
use super::delta::find_delta;
use super::pairs::{ceil_inv, corner_spacing_violation, corners_in_arc, violating_pair, ArcPair};
use crate::geometry::{measure_of, Curve, CurveJson};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurgeryConfig {
    pub epsilon: f64,
    /// Locality scale; detected with [`find_delta`] when absent.
    pub delta: Option<f64>,
    /// Defaults to `4 (T1 bound + T2 bound)`.
    pub max_iterations: Option<usize>,
    pub oscillation_bound: f64,
    pub sampling: BallGrowthSampling,
    /// Compute brute-force ball growth for every piece.
    pub certify: bool,
}

impl SurgeryConfig {
    pub fn new(epsilon: f64) -> Self {
        Self {
            epsilon,
            delta: None,
            max_iterations: None,
            oscillation_bound: 1.0 / 3.0,
            sampling: BallGrowthSampling::default(),
            certify: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 0.1) {
            return Err(Error::InvalidEpsilon(self.epsilon));
        }
        if !(self.oscillation_bound > 0.0 && self.oscillation_bound <= 1.0 / 3.0) {
            return Err(Error::InvalidArgument(format!(
                "oscillation bound {} outside (0, 1/3]",
                self.oscillation_bound
            )));
        }
        if let Some(d) = self.delta {
            if !(d > 0.0) {
                return Err(Error::InvalidArgument(format!("delta {d} must be positive")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CutKind {
    TypeI,
    TypeII,
    Terminal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutRecord {
    pub kind: CutKind,
    /// Arc start on the curve being cut.
    pub t: f64,
    /// Arc end, reduced mod the length of the curve being cut.
    pub t_prime: f64,
    pub arc_length: f64,
    pub bridge_length: f64,
    pub corners_removed: usize,
    pub corners_added: usize,
    pub piece_index: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurgeryReport {
    #[serde(with = "pieces_json")]
    pub pieces: Vec<Curve>,
    pub records: Vec<CutRecord>,
    pub epsilon: f64,
    pub delta: f64,
    pub total_length_in: f64,
    pub total_length_out: f64,
    /// Brute-force ball growth per piece (attained lower bound).
    pub ball_growth_certified: Vec<f64>,
    /// Upper bracket per piece, when grid centers were sampled.
    pub ball_growth_upper: Vec<Option<f64>>,
    pub t1: usize,
    pub t2: usize,
    pub t1_bound: f64,
    pub t2_bound: f64,
    /// The input carried registered corners, which the guarantees for `C¹`
    /// curves do not cover.
    pub out_of_theorem: bool,
}

mod pieces_json {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(pieces: &[Curve], s: S) -> std::result::Result<S::Ok, S::Error> {
        let js: Vec<CurveJson> = pieces.iter().map(CurveJson::from).collect();
        js.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Curve>, D::Error> {
        let js: Vec<CurveJson> = Vec::deserialize(d)?;
        js.into_iter()
            .map(|j| Curve::try_from(j).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// `2L / ((1 − ε) δ)` and `8Lε / ((1 − ε) δ)`.
pub fn cut_count_bounds(length: f64, epsilon: f64, delta: f64) -> (f64, f64) {
    let t1 = 2.0 * length / ((1.0 - epsilon) * delta);
    let t2 = 8.0 * length * epsilon / ((1.0 - epsilon) * delta);
    (t1, t2)
}

pub fn certify_pieces(pieces: &[Curve], sampling: &BallGrowthSampling) -> Result<Vec<BallGrowthEstimate>> {
    pieces
        .par_iter()
        .map(|p| ball_growth_constant(&measure_of(p), sampling))
        .collect()
}

/// Splits a closed curve into loops of controlled ball growth.
///
/// Repeats: a corner-spacing violation triggers a Type II cut of that
/// window; otherwise the shortest arc violating `|γ(s) − γ(s')| ≥ ε d_Γ`
/// is removed by a Type I cut; when neither exists the remaining curve is
/// the terminal piece. `δ` is computed once on the input and kept fixed.
pub fn surgery_decompose(curve: &Curve, config: &SurgeryConfig) -> Result<SurgeryReport> {
    config.validate()?;
    if !curve.is_closed() {
        return Err(Error::InvalidArgument("surgery needs a closed curve".into()));
    }
    let eps = config.epsilon;
    let delta = match config.delta {
        Some(d) => d,
        None => find_delta(curve, config.oscillation_bound)?,
    };
    let length = curve.length();
    let (t1_bound, t2_bound) = cut_count_bounds(length, eps, delta);
    let limit = config
        .max_iterations
        .unwrap_or_else(|| (4.0 * (t1_bound + t2_bound)).ceil().max(16.0) as usize);

    let mut work = curve.clone();
    let mut pieces = Vec::new();
    let mut records = Vec::new();
    let (mut t1, mut t2) = (0, 0);
    let mut finished = false;
    for _ in 0..limit {
        let (kind, pair): (CutKind, ArcPair) = if let Some(p) = corner_spacing_violation(&work, eps, delta) {
            (CutKind::TypeII, p)
        } else if let Some(p) = violating_pair(&work, eps, delta) {
            (CutKind::TypeI, p)
        } else {
            records.push(CutRecord {
                kind: CutKind::Terminal,
                t: 0.0,
                t_prime: 0.0,
                arc_length: work.length(),
                bridge_length: 0.0,
                corners_removed: 0,
                corners_added: 0,
                piece_index: pieces.len(),
            });
            pieces.push(work.clone());
            finished = true;
            break;
        };
        let removed = corners_in_arc(&work, &pair);
        let before = work.corners().len();
        let bridge = (work.point_at(pair.t) - work.point_at(pair.t_prime)).norm();
        let (rest, piece) = work.cut_arc(pair.t, pair.arc)?;
        let added = (rest.corners().len() + removed).saturating_sub(before);
        match kind {
            CutKind::TypeI => t1 += 1,
            CutKind::TypeII => t2 += 1,
            CutKind::Terminal => unreachable!(),
        }
        records.push(CutRecord {
            kind,
            t: pair.t,
            t_prime: pair.t_prime,
            arc_length: pair.arc,
            bridge_length: bridge,
            corners_removed: removed,
            corners_added: added,
            piece_index: pieces.len(),
        });
        pieces.push(piece);
        work = rest;
    }
    if !finished {
        return Err(Error::IterationLimitExceeded { limit });
    }

    let (certified, upper) = if config.certify {
        let est = certify_pieces(&pieces, &config.sampling)?;
        (est.iter().map(|e| e.lower).collect(), est.iter().map(|e| e.upper).collect())
    } else {
        (Vec::new(), Vec::new())
    };
    Ok(SurgeryReport {
        total_length_out: pieces.iter().map(Curve::length).sum(),
        pieces,
        records,
        epsilon: eps,
        delta,
        total_length_in: length,
        ball_growth_certified: certified,
        ball_growth_upper: upper,
        t1,
        t2,
        t1_bound,
        t2_bound,
        out_of_theorem: !curve.corners().is_empty(),
    })
}

/// The bound `100 ⌈ε⁻¹⌉` every piece must satisfy.
pub fn piece_bound(epsilon: f64) -> f64 {
    100.0 * ceil_inv(epsilon) as f64
}
