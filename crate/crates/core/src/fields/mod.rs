//! Sampled vector fields on regular grids, mollified loop currents, discrete
//! divergence and the `VFG1` binary format.

pub mod divergence;
pub mod grid;
pub mod mollify;
pub mod vfg;

pub use divergence::{divergence, Boundary, DivergenceReport};
pub use grid::FieldGrid;
pub use mollify::{current_field, dirac_family, loop_current, point_mass, smirnov_superpose};
pub use vfg::{decode, encode, read_vfg, write_vfg};
