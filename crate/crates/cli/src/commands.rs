use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use loopforge::fields::{read_vfg, write_vfg, FieldGrid};
use loopforge::geometry::{measure_of, read_curve, Curve};
use loopforge::lorentz::{layercake_norm, lorentz_norm, rearrange};
use loopforge::pde::{
    leray_project, poisson_residual, solve_divcurl, solve_poisson_vec, spectral_curl, spectral_divergence,
    PoissonResidual, SOLENOIDAL_TOLERANCE,
};
use loopforge::potential::{riesz_direct_grid, RatioGrid};
use loopforge::surgery::{surgery_decompose, verify_decomposition, SurgeryConfig, SurgeryReport, VerificationSummary};

use crate::campaign::{run_campaign, write_reports, Campaign};
use crate::Outcome;

/// Spectral residuals above this fail `divcurl`.
pub const DIVCURL_RESIDUAL: f64 = 1e-8;
/// Spectral residuals above this fail `poisson`.
pub const POISSON_RESIDUAL: f64 = 1e-10;

fn load_curve(path: &Path) -> Result<Curve> {
    read_curve(path).with_context(|| format!("loading curve {}", path.display()))
}

fn load_field(path: &Path) -> Result<FieldGrid> {
    read_vfg(path).with_context(|| format!("loading field {}", path.display()))
}

fn save_field(path: &Path, grid: &FieldGrid) -> Result<()> {
    write_vfg(path, grid).with_context(|| format!("writing field {}", path.display()))
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn outcome(passed: bool) -> Outcome {
    if passed {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

#[derive(Serialize)]
struct SurgeryOutput<'a> {
    report: &'a SurgeryReport,
    verification: &'a VerificationSummary,
    passed: bool,
}

pub fn surgery(curve: &Path, epsilon: f64, delta: Option<f64>, out: Option<&Path>) -> Result<Outcome> {
    let c = load_curve(curve)?;
    let mut cfg = SurgeryConfig::new(epsilon);
    cfg.delta = delta;
    let report = surgery_decompose(&c, &cfg)?;
    let verification = verify_decomposition(&c, &report, epsilon)?;
    let passed = verification.all_passed();
    emit(&SurgeryOutput { report: &report, verification: &verification, passed }, out)?;
    Ok(outcome(passed))
}

/// `I_α μ_Γ` on a grid of `cells` per axis over a cube of four diameters.
pub fn potential(curve: &Path, alpha: f64, cells: usize, out: &Path) -> Result<Outcome> {
    let c = load_curve(curve)?;
    let template = RatioGrid { cells, box_diameters: 4.0 }.template(&c)?;
    let field = riesz_direct_grid(&measure_of(&c), alpha, &template)?;
    save_field(out, &field)?;
    Ok(Outcome::Pass)
}

#[derive(Debug, Serialize)]
pub struct NormsOutput {
    pub p: f64,
    pub q: f64,
    pub lorentz: f64,
    /// `∫₀^∞ |{|f| > s}|^{1/p} ds`.
    pub layercake: f64,
    pub l1: f64,
    pub max_abs: f64,
}

pub fn norms(field: &Path, p: f64, q: f64) -> Result<Outcome> {
    let g = load_field(field)?;
    let r = rearrange(&g);
    let lorentz = lorentz_norm(&r, p, q)?;
    let layercake = layercake_norm(&r, 1.0 / p)?;
    emit(&NormsOutput { p, q, lorentz, layercake, l1: g.l1_norm(), max_abs: g.max_abs() }, None)?;
    Ok(Outcome::Pass)
}

fn max_diff(a: &FieldGrid, b: &FieldGrid) -> f64 {
    a.data.iter().zip(&b.data).fold(0.0, |m: f64, (x, y)| m.max((x - y).abs()))
}

#[derive(Debug, Serialize)]
pub struct DivcurlOutput {
    /// `‖curl Z − PF‖_∞ / ‖F‖_∞`, `P` the Leray projection.
    pub curl_residual: f64,
    /// `‖div Z‖_∞ / ‖Z‖_∞`.
    pub div_residual: f64,
    pub passed: bool,
}

pub fn divcurl(field: &Path, out: &Path) -> Result<Outcome> {
    let f = load_field(field)?;
    let z = solve_divcurl(&f, SOLENOIDAL_TOLERANCE)?;
    let curl_residual = max_diff(&spectral_curl(&z)?, &leray_project(&f)?) / f.max_abs();
    let div_residual = spectral_divergence(&z)?.max_abs() / z.max_abs();
    save_field(out, &z)?;
    let passed = curl_residual <= DIVCURL_RESIDUAL && div_residual <= DIVCURL_RESIDUAL;
    emit(&DivcurlOutput { curl_residual, div_residual, passed }, None)?;
    Ok(outcome(passed))
}

#[derive(Debug, Serialize)]
pub struct PoissonOutput {
    pub residual: PoissonResidual,
    pub passed: bool,
}

pub fn poisson(field: &Path, out: &Path, grad: Option<&Path>) -> Result<Outcome> {
    let f = load_field(field)?;
    let sol = solve_poisson_vec(&f)?;
    let residual = poisson_residual(&f, &sol);
    save_field(out, &sol.u)?;
    if let Some(g) = grad {
        save_field(g, &sol.grad_u)?;
    }
    let passed = residual.laplacian <= POISSON_RESIDUAL && residual.gradient <= POISSON_RESIDUAL;
    emit(&PoissonOutput { residual, passed }, None)?;
    Ok(outcome(passed))
}

#[derive(Debug, Serialize)]
struct VerifySummary {
    config_hash: String,
    output_dir: PathBuf,
    items: usize,
    passed: bool,
}

pub fn verify(campaign: &Path, out: Option<&Path>) -> Result<Outcome> {
    let (c, base) = Campaign::load(campaign)?;
    let report = run_campaign(&c, &base)?;
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| c.output_dir.clone());
    write_reports(&report, &dir)?;
    emit(
        &VerifySummary { config_hash: report.config_hash.clone(), output_dir: dir, items: report.items.len(), passed: report.passed },
        None,
    )?;
    Ok(outcome(report.passed))
}
