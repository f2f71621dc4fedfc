//! Fourier-multiplier operators on periodic boxes: Riesz transforms and
//! potentials, the div-curl solve `Z = curl(−Δ)⁻¹F` and the vector Poisson
//! solve `U = I₂F`.

pub mod norms;
pub mod solve;
pub mod spectral;

pub use norms::{potential_ratio, solution_ratios, SolutionRatios};
pub use solve::{
    band_limit, leray_project, neg_laplacian, poisson_residual, riesz_potential_spectral, riesz_transform,
    solenoidal_defect, solve_divcurl, solve_divcurl_riesz, solve_poisson_vec, spectral_curl, spectral_divergence,
    spectral_gradient, PoissonResidual, PoissonSolution, SOLENOIDAL_TOLERANCE,
};
pub use spectral::SpectralGrid;
