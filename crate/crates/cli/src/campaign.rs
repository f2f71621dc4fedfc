//! Verification campaigns: surgery, per-piece potentials and layer-cake
//! ratios over a fixture set, with a dilation ladder and a Dirac control.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use loopforge::fields::{point_mass, FieldGrid};
use loopforge::geometry::fixtures;
use loopforge::geometry::{read_curve, Curve};
use loopforge::pde::potential_ratio;
use loopforge::potential::{inequality_ratio, RatioGrid};
use loopforge::surgery::{surgery_decompose, verify_with, BallGrowthSampling, SurgeryConfig, VerificationSummary};
use loopforge::Point;

pub const CAMPAIGN_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Campaign {
    pub campaign_version: u32,
    pub seed: u64,
    /// Fixture names, or paths to curve JSON files (ending in `.json`,
    /// relative to the campaign file).
    pub curves: Vec<String>,
    pub alphas: Vec<f64>,
    pub epsilons: Vec<f64>,
    pub dilations: Vec<f64>,
    pub grid_2d: RatioGrid,
    pub grid_3d: RatioGrid,
    /// Level splitting the layer-cake integral into its two parts.
    pub s_cut: f64,
    /// Allowed `max/min − 1` of a ratio along the dilation ladder.
    pub dilation_tolerance: f64,
    /// Curves without registered corners and with more nodes than this are
    /// resampled at uniform arclength before surgery.
    #[serde(default)]
    pub max_nodes: Option<usize>,
    #[serde(default)]
    pub dirac: Option<DiracControl>,
    pub output_dir: PathBuf,
}

/// Point masses of shrinking width on a 3-dimensional grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiracControl {
    pub alpha: f64,
    pub cells: usize,
    /// Mollifier widths in grid spacings, widest first.
    pub widths: Vec<f64>,
}

impl Campaign {
    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading campaign {}", path.display()))?;
        let c: Campaign = serde_json::from_str(&text).with_context(|| format!("parsing campaign {}", path.display()))?;
        c.validate()?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((c, base))
    }

    pub fn validate(&self) -> Result<()> {
        if self.campaign_version != CAMPAIGN_VERSION {
            bail!("campaign_version {} is not supported (expected {CAMPAIGN_VERSION})", self.campaign_version);
        }
        if self.curves.is_empty() || self.alphas.is_empty() || self.epsilons.is_empty() {
            bail!("campaign needs at least one curve, alpha and epsilon");
        }
        if !self.dilations.iter().any(|&l| l == 1.0) {
            bail!("the dilation ladder must contain 1");
        }
        if self.dilations.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            bail!("dilations must be positive");
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON encoding.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("campaign serializes");
        hex::encode(Sha256::digest(bytes))
    }
}

pub fn fixture(name: &str) -> Option<Curve> {
    fixtures::surgery_suite()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, c)| c)
        .or_else(|| match name {
            "square" => Some(fixtures::square(1.0)),
            "peanut" => Some(fixtures::peanut(0.05)),
            _ => None,
        })
}

fn resolve_curve(name: &str, base: &Path, max_nodes: Option<usize>) -> Result<Curve> {
    let curve = if name.ends_with(".json") {
        let path = base.join(name);
        read_curve(&path).with_context(|| format!("loading curve {}", path.display()))?
    } else {
        fixture(name).with_context(|| format!("unknown fixture {name:?}"))?
    };
    Ok(match max_nodes {
        Some(n) if curve.nodes().len() > n && curve.corners().is_empty() && curve.is_closed() => {
            fixtures::resample_closed(curve.dim(), curve.nodes(), curve.length() / n as f64)
        }
        _ => curve,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub alpha: f64,
    pub lambda: f64,
    /// `Σ_k |||I_α μ_k||| / |Γ|`.
    pub ratio: f64,
    /// `|||I_α μ_Γ||| / |Γ|`.
    pub whole_ratio: f64,
    /// The two parts of the piece sum, split at `s_cut`.
    pub low: f64,
    pub high: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DilationCheck {
    pub alpha: f64,
    pub spread: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ItemReport {
    pub curve: String,
    pub epsilon: f64,
    pub pieces: usize,
    pub t1: usize,
    pub t2: usize,
    pub out_of_theorem: bool,
    pub verification: VerificationSummary,
    pub rows: Vec<RatioRow>,
    pub dilation: Vec<DilationCheck>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiracReport {
    pub alpha: f64,
    pub widths: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Ratios strictly increase as the width shrinks.
    pub increasing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub campaign_version: u32,
    pub config_hash: String,
    pub items: Vec<ItemReport>,
    pub dirac: Option<DiracReport>,
    pub passed: bool,
}

fn spread(values: &[f64]) -> f64 {
    let (lo, hi) = values.iter().fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(*v), b.max(*v)));
    hi / lo - 1.0
}

fn run_item(c: &Campaign, name: &str, curve: &Curve, epsilon: f64) -> Result<ItemReport> {
    let report = surgery_decompose(curve, &SurgeryConfig::new(epsilon)).with_context(|| format!("surgery on {name}"))?;
    let verification = verify_with(curve, &report, epsilon, &BallGrowthSampling::default(), 50, c.seed)?;
    let grid = if curve.dim() == 3 { c.grid_3d } else { c.grid_2d };
    let mut rows = Vec::new();
    let mut dilation = Vec::new();
    for &alpha in &c.alphas {
        let mut ratios = Vec::new();
        for &lambda in &c.dilations {
            let scaled = curve.scaled(lambda);
            let pieces: Vec<Curve> = report.pieces.iter().map(|p| p.scaled(lambda)).collect();
            let r = inequality_ratio(&scaled, &pieces, alpha, &grid, c.s_cut)
                .with_context(|| format!("potential of {name} at α = {alpha}, λ = {lambda}"))?;
            ratios.push(r.ratio);
            rows.push(RatioRow {
                alpha,
                lambda,
                ratio: r.ratio,
                whole_ratio: r.whole_ratio,
                low: r.pieces.iter().map(|p| p.low).sum(),
                high: r.pieces.iter().map(|p| p.high).sum(),
            });
        }
        let s = spread(&ratios);
        dilation.push(DilationCheck { alpha, spread: s, passed: s <= c.dilation_tolerance });
    }
    let finite = rows.iter().all(|r| r.ratio.is_finite());
    let passed = verification.all_passed() && finite && dilation.iter().all(|d| d.passed);
    Ok(ItemReport {
        curve: name.to_string(),
        epsilon,
        pieces: report.pieces.len(),
        t1: report.t1,
        t2: report.t2,
        out_of_theorem: report.out_of_theorem,
        verification,
        rows,
        dilation,
        passed,
    })
}

pub fn run_dirac(d: &DiracControl) -> Result<DiracReport> {
    let h = 1.0 / d.cells as f64;
    let template = FieldGrid::centered(3, d.cells, h, Point::zeros(), 1)?;
    let ratios: Vec<f64> = d
        .widths
        .iter()
        .map(|w| Ok(potential_ratio(&point_mass(&Point::zeros(), w * h, &template)?, d.alpha)?))
        .collect::<Result<_>>()?;
    let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
    Ok(DiracReport { alpha: d.alpha, widths: d.widths.clone(), ratios, increasing })
}

/// Runs every (curve, ε) item in the worker pool and assembles the report
/// in campaign order.
pub fn run_campaign(c: &Campaign, base: &Path) -> Result<CampaignReport> {
    let curves: Vec<(String, Curve)> =
        c.curves.iter().map(|n| Ok((n.clone(), resolve_curve(n, base, c.max_nodes)?))).collect::<Result<_>>()?;
    let jobs: Vec<(&str, &Curve, f64)> = curves
        .iter()
        .flat_map(|(n, cv)| c.epsilons.iter().map(move |&e| (n.as_str(), cv, e)))
        .collect();
    let items: Vec<ItemReport> = jobs.par_iter().map(|(n, cv, e)| run_item(c, n, cv, *e)).collect::<Result<_>>()?;
    let dirac = c.dirac.as_ref().map(run_dirac).transpose()?;
    let passed = items.iter().all(|i| i.passed) && dirac.as_ref().map_or(true, |d| d.increasing);
    Ok(CampaignReport { campaign_version: CAMPAIGN_VERSION, config_hash: c.hash(), items, dirac, passed })
}

pub fn ratios_csv(report: &CampaignReport) -> String {
    let mut out = format!("# config_hash={}\ncurve,epsilon,alpha,lambda,ratio,whole_ratio,low,high\n", report.config_hash);
    for item in &report.items {
        for r in &item.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                item.curve, item.epsilon, r.alpha, r.lambda, r.ratio, r.whole_ratio, r.low, r.high
            ));
        }
    }
    out
}

/// Writes `report.json` and `ratios.csv` into `dir`.
pub fn write_reports(report: &CampaignReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let json = serde_json::to_string_pretty(report)?;
    std::fs::write(dir.join("report.json"), json + "\n").context("writing report.json")?;
    std::fs::write(dir.join("ratios.csv"), ratios_csv(report)).context("writing ratios.csv")?;
    Ok(())
}
