//! Heat extensions, Riesz potentials of curve measures, the maximal
//! functions `M₁` and `M₂`, a dyadic BMO estimator and the two pointwise
//! interpolation bounds.

pub mod bmo;
pub mod heat;
pub mod inequality;
pub mod lemmas;
pub mod maximal;
pub mod riesz;

pub use bmo::{bmo_estimate, BmoEstimate, BmoScale, CubeLadder};
pub use heat::{heat_convolve_measure, heat_kernel, heat_kernel_gradient, GaussianSource, HeatSource};
pub use inequality::{inequality_ratio, InequalityRatio, LayerCakeSplit, RatioGrid};
pub use lemmas::{
    bmo_of_curve, check_interpolation_with, check_lemma_interpolation1, check_lemma_pointwise_global, implied_interpolation_c,
    interpolation_constant, pointwise_global_constant, InterpolationConfig, InterpolationReport, LemmaSample,
    PointSet, PointwiseGlobalReport,
};
pub use maximal::{
    grad_heat_surface, maximal_m1, maximal_m2, weak_type_profile, AreaProfile, MaximalValue, TimeLadder,
};
pub use riesz::{
    riesz_direct, riesz_direct_grid, riesz_direct_many, riesz_normalization, riesz_semigroup, QuadratureSpec,
    RieszOfSource,
};
