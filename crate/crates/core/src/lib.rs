//! Curve surgery, Riesz potentials of curve measures and Lorentz-scale
//! diagnostics for divergence-free vector fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: polyline curves, their vector measures, the cut operation
//!   and cone spanning surfaces.
//! * [`surgery`]: ball-growth estimation and the decomposition of a closed
//!   curve into loops with controlled ball growth.
//! * [`potential`]: heat kernel, Riesz potentials (semigroup and direct
//!   kernel), heat maximal functions, a dyadic BMO estimator and the two
//!   pointwise interpolation bounds.
//! * [`lorentz`]: decreasing rearrangements, `L^{p,q}` norms and the
//!   layer-cake functional.
//! * [`fields`]: sampled vector fields, mollified loop currents and the
//!   `VFG1` binary format.
//! * [`pde`]: periodic spectral solvers for the div-curl system and the
//!   vector Poisson equation.

pub mod error;
pub mod fields;
pub mod geometry;
pub mod lorentz;
pub mod pde;
pub mod potential;
pub mod quad;
pub mod surgery;

pub use error::{Error, Result};

/// Points and vectors. Planar data uses `z = 0`.
pub type Point = nalgebra::Vector3<f64>;
