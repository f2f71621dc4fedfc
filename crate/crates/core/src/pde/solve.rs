use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::spectral::SpectralGrid;
use crate::fields::FieldGrid;
use crate::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Largest [`solenoidal_defect`] accepted by [`solve_divcurl`].
pub const SOLENOIDAL_TOLERANCE: f64 = 1e-6;

fn vector_field(grid: &FieldGrid) -> Result<()> {
    if grid.ncomp != grid.dim {
        return Err(Error::DimensionMismatch(format!(
            "expected {} components, field has {}",
            grid.dim, grid.ncomp
        )));
    }
    Ok(())
}

fn three_dimensional(grid: &FieldGrid) -> Result<()> {
    if grid.dim != 3 {
        return Err(Error::DimensionMismatch(format!("operator is defined in 3 dimensions, grid has {}", grid.dim)));
    }
    vector_field(grid)
}

fn multiply(sg: &SpectralGrid, spec: &[Complex64], m: impl Fn([f64; 3], f64) -> Complex64 + Sync) -> Vec<Complex64> {
    spec.par_iter()
        .enumerate()
        .map(|(idx, &v)| match sg.band(idx) {
            Some(xi) => {
                let k = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
                m(xi, k) * v
            }
            None => Complex64::default(),
        })
        .collect()
}

/// Applies a scalar multiplier to every component.
fn componentwise(grid: &FieldGrid, m: impl Fn([f64; 3], f64) -> Complex64 + Sync + Copy) -> FieldGrid {
    let sg = SpectralGrid::new(grid);
    let comps: Vec<Vec<f64>> = (0..grid.ncomp)
        .map(|c| sg.inverse(multiply(&sg, &sg.forward(&grid.component(c)), m)))
        .collect();
    FieldGrid::from_components(grid, &comps)
}

/// `R_i`, the multiplier `iξ_i/|ξ|`, applied to each component.
pub fn riesz_transform(grid: &FieldGrid, i: usize) -> Result<FieldGrid> {
    if i >= grid.dim {
        return Err(Error::DimensionMismatch(format!("Riesz transform {i} on a {}-dimensional grid", grid.dim)));
    }
    Ok(componentwise(grid, move |xi, k| I * (xi[i] / k)))
}

/// `I_α`, the multiplier `|ξ|^{−α}`, applied to each component.
pub fn riesz_potential_spectral(grid: &FieldGrid, alpha: f64) -> Result<FieldGrid> {
    if !(alpha > 0.0 && alpha < grid.dim as f64) {
        return Err(Error::AlphaOutOfRange { alpha, dim: grid.dim });
    }
    Ok(componentwise(grid, move |_, k| Complex64::new(k.powf(-alpha), 0.0)))
}

/// `−Δ`, the multiplier `|ξ|²`, applied to each component.
pub fn neg_laplacian(grid: &FieldGrid) -> FieldGrid {
    componentwise(grid, |_, k| Complex64::new(k * k, 0.0))
}

/// The band-limited part of each component, with the mean removed.
pub fn band_limit(grid: &FieldGrid) -> FieldGrid {
    componentwise(grid, |_, _| Complex64::new(1.0, 0.0))
}

/// Spectral gradient; component `c·d + j` holds `∂_j F_c`.
pub fn spectral_gradient(grid: &FieldGrid) -> FieldGrid {
    let sg = SpectralGrid::new(grid);
    let d = grid.dim;
    let mut comps = Vec::with_capacity(grid.ncomp * d);
    for c in 0..grid.ncomp {
        let spec = sg.forward(&grid.component(c));
        for j in 0..d {
            comps.push(sg.inverse(multiply(&sg, &spec, |xi, _| I * xi[j])));
        }
    }
    FieldGrid::from_components(grid, &comps)
}

pub fn spectral_divergence(grid: &FieldGrid) -> Result<FieldGrid> {
    vector_field(grid)?;
    let sg = SpectralGrid::new(grid);
    let specs = sg.forward_all(grid)?;
    let mut total = vec![Complex64::default(); sg.len()];
    for (j, spec) in specs.iter().enumerate() {
        for (t, v) in total.iter_mut().zip(multiply(&sg, spec, |xi, _| I * xi[j])) {
            *t += v;
        }
    }
    Ok(FieldGrid::from_components(grid, &[sg.inverse(total)]))
}

fn cross(sg: &SpectralGrid, specs: &[Vec<Complex64>], scale: impl Fn(f64) -> f64 + Sync + Copy) -> Vec<Vec<f64>> {
    (0..3)
        .map(|a| {
            let (b, c) = ((a + 1) % 3, (a + 2) % 3);
            let mut out = multiply(sg, &specs[c], |xi, k| I * (xi[b] * scale(k)));
            for (o, v) in out.iter_mut().zip(multiply(sg, &specs[b], |xi, k| I * (xi[c] * scale(k)))) {
                *o -= v;
            }
            sg.inverse(out)
        })
        .collect()
}

pub fn spectral_curl(grid: &FieldGrid) -> Result<FieldGrid> {
    three_dimensional(grid)?;
    let sg = SpectralGrid::new(grid);
    let specs = sg.forward_all(grid)?;
    Ok(FieldGrid::from_components(grid, &cross(&sg, &specs, |_| 1.0)))
}

/// `‖σ·F̂‖₂ / ‖|σ| F̂‖₂` over the band with `σ_j = sin(ξ_j h)/h`, the symbol
/// of the centred difference. Zero when the centred-difference divergence
/// vanishes, close to one for a gradient.
///
/// Mollified currents are solenoidal for the centred difference rather
/// than for `iξ`; their spectral divergence sits in the highest modes and
/// is removed by the Leray projection that `curl Z` reproduces.
pub fn solenoidal_defect(grid: &FieldGrid) -> Result<f64> {
    vector_field(grid)?;
    let sg = SpectralGrid::new(grid);
    let specs = sg.forward_all(grid)?;
    let terms: Vec<(f64, f64)> = (0..sg.len())
        .into_par_iter()
        .filter_map(|idx| sg.band(idx).map(|xi| (idx, xi)))
        .map(|(idx, xi)| {
            let xi = xi.map(|x| (x * sg.h).sin() / sg.h);
            let mut dot = Complex64::default();
            let mut energy = 0.0;
            for (j, spec) in specs.iter().enumerate() {
                dot += spec[idx] * xi[j];
                energy += spec[idx].norm_sqr();
            }
            let k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
            (dot.norm_sqr(), k2 * energy)
        })
        .collect();
    let (num, den) = terms.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(if den > 0.0 { (num / den).sqrt() } else { 0.0 })
}

/// The Leray projection `F − ∇Δ⁻¹ div F` of the band-limited field.
pub fn leray_project(grid: &FieldGrid) -> Result<FieldGrid> {
    vector_field(grid)?;
    let sg = SpectralGrid::new(grid);
    let specs = sg.forward_all(grid)?;
    let d = grid.dim;
    let comps: Vec<Vec<f64>> = (0..d)
        .map(|a| {
            let mut out = multiply(&sg, &specs[a], |_, _| Complex64::new(1.0, 0.0));
            for (b, spec) in specs.iter().enumerate() {
                let part = multiply(&sg, spec, |xi, k| Complex64::new(xi[a] * xi[b] / (k * k), 0.0));
                for (o, v) in out.iter_mut().zip(part) {
                    *o -= v;
                }
            }
            sg.inverse(out)
        })
        .collect();
    Ok(FieldGrid::from_components(grid, &comps))
}

/// `Z = curl (−Δ)⁻¹ F`, so that `curl Z` is the Leray projection of `F`
/// and `div Z = 0`.
///
/// Fails with `NotSolenoidal` when [`solenoidal_defect`] exceeds
/// `tolerance`, since `curl Z` would then differ from `F`.
pub fn solve_divcurl(f: &FieldGrid, tolerance: f64) -> Result<FieldGrid> {
    three_dimensional(f)?;
    let defect = solenoidal_defect(f)?;
    if defect > tolerance {
        return Err(Error::NotSolenoidal(defect));
    }
    let sg = SpectralGrid::new(f);
    let specs = sg.forward_all(f)?;
    Ok(FieldGrid::from_components(f, &cross(&sg, &specs, |k| 1.0 / (k * k))))
}

/// The same `Z` assembled from Riesz transforms,
/// `Z = (R₂I₁F₃ − R₃I₁F₂, R₃I₁F₁ − R₁I₁F₃, R₁I₁F₂ − R₂I₁F₁)`.
pub fn solve_divcurl_riesz(f: &FieldGrid, tolerance: f64) -> Result<FieldGrid> {
    three_dimensional(f)?;
    let defect = solenoidal_defect(f)?;
    if defect > tolerance {
        return Err(Error::NotSolenoidal(defect));
    }
    let potential = riesz_potential_spectral(f, 1.0)?;
    let r: Vec<FieldGrid> = (0..3).map(|j| riesz_transform(&potential, j)).collect::<Result<_>>()?;
    let comps: Vec<Vec<f64>> = (0..3)
        .map(|a| {
            let (b, c) = ((a + 1) % 3, (a + 2) % 3);
            r[b].component(c).iter().zip(r[c].component(b)).map(|(p, q)| p - q).collect()
        })
        .collect();
    Ok(FieldGrid::from_components(f, &comps))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoissonSolution {
    /// `U = I₂F`.
    pub u: FieldGrid,
    /// `∂_j U_c = R_j I₁ F_c` in component `c·d + j`.
    pub grad_u: FieldGrid,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoissonResidual {
    /// `‖−ΔU − F‖_∞ / ‖F‖_∞` against the band-limited `F`.
    pub laplacian: f64,
    /// `‖∇U − gradU‖_∞ / ‖gradU‖_∞` with `∇` the spectral gradient.
    pub gradient: f64,
}

/// `U = I₂F` with `∇U = R I₁F`, componentwise. Needs `d ≥ 3`.
pub fn solve_poisson_vec(f: &FieldGrid) -> Result<PoissonSolution> {
    if f.dim < 3 {
        return Err(Error::DimensionTooSmall(f.dim));
    }
    let u = riesz_potential_spectral(f, 2.0)?;
    let i1 = riesz_potential_spectral(f, 1.0)?;
    let r: Vec<FieldGrid> = (0..f.dim).map(|j| riesz_transform(&i1, j)).collect::<Result<_>>()?;
    let mut comps = Vec::with_capacity(f.ncomp * f.dim);
    for c in 0..f.ncomp {
        for rj in &r {
            comps.push(rj.component(c));
        }
    }
    let grad_u = FieldGrid::from_components(f, &comps);
    Ok(PoissonSolution { u, grad_u })
}

pub fn poisson_residual(f: &FieldGrid, sol: &PoissonSolution) -> PoissonResidual {
    let rel = |a: &FieldGrid, b: &FieldGrid| {
        let diff = a.data.iter().zip(&b.data).fold(0.0, |m: f64, (x, y)| m.max((x - y).abs()));
        let scale = b.max_abs();
        if scale > 0.0 {
            diff / scale
        } else {
            diff
        }
    };
    PoissonResidual {
        laplacian: rel(&neg_laplacian(&sol.u), &band_limit(f)),
        gradient: rel(&spectral_gradient(&sol.u), &sol.grad_u),
    }
}
