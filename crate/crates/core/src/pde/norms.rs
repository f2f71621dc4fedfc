//! Lorentz-norm ratios of the potentials of a sampled field against its
//! total mass `‖F‖₁`.

use serde::{Deserialize, Serialize};

use super::solve::{riesz_potential_spectral, solve_divcurl, solve_poisson_vec};
use crate::fields::FieldGrid;
use crate::lorentz::{lorentz_norm, rearrange};
use crate::{Error, Result};

fn mass(f: &FieldGrid) -> Result<f64> {
    let m = f.l1_norm();
    if m > 0.0 {
        Ok(m)
    } else {
        Err(Error::EmptyMeasure)
    }
}

/// `‖I_α F‖_{L^{d/(d−α),1}} / ‖F‖₁` with the periodic spectral `I_α`.
pub fn potential_ratio(f: &FieldGrid, alpha: f64) -> Result<f64> {
    let m = mass(f)?;
    let d = f.dim as f64;
    let potential = riesz_potential_spectral(f, alpha)?;
    Ok(lorentz_norm(&rearrange(&potential), d / (d - alpha), 1.0)? / m)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionRatios {
    pub mass: f64,
    /// `‖Z‖_{L^{3/2,1}} / ‖F‖₁`.
    pub z: f64,
    /// `‖U‖_{L^{3,1}} / ‖F‖₁`.
    pub u: f64,
    /// `‖∇U‖_{L^{3/2,1}} / ‖F‖₁`.
    pub grad_u: f64,
}

/// Solves both systems for a solenoidal field on a 3-dimensional grid and
/// reports the Lorentz norms of `Z`, `U` and `∇U` relative to `‖F‖₁`.
pub fn solution_ratios(f: &FieldGrid, tolerance: f64) -> Result<SolutionRatios> {
    let m = mass(f)?;
    let z = solve_divcurl(f, tolerance)?;
    let sol = solve_poisson_vec(f)?;
    Ok(SolutionRatios {
        mass: m,
        z: lorentz_norm(&rearrange(&z), 1.5, 1.0)? / m,
        u: lorentz_norm(&rearrange(&sol.u), 3.0, 1.0)? / m,
        grad_u: lorentz_norm(&rearrange(&sol.grad_u), 1.5, 1.0)? / m,
    })
}
