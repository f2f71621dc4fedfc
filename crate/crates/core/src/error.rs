use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("parameter {value} outside [0, {length}]")]
    OutOfRange { value: f64, length: f64 },
    #[error("invalid cut interval ({t}, {t_prime})")]
    InvalidInterval { t: f64, t_prime: f64 },
    #[error("measure has no mass")]
    EmptyMeasure,
    #[error("no valid delta: {0}")]
    NoValidDelta(String),
    #[error("surgery exceeded {limit} iterations")]
    IterationLimitExceeded { limit: usize },
    #[error("epsilon {0} outside (0, 1/10)")]
    InvalidEpsilon(f64),
    #[error("heat time must be positive, got {0}")]
    NonpositiveTime(f64),
    #[error("alpha {alpha} outside (0, {dim})")]
    AlphaOutOfRange { alpha: f64, dim: usize },
    #[error("evaluation point lies on the support of the measure")]
    PointOnSupport,
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("bad Lorentz exponents p = {p}, q = {q}")]
    BadExponents { p: f64, q: f64 },
    #[error("mollifier width {width} below 2h = {min}")]
    WidthTooSmall { width: f64, min: f64 },
    #[error("support comes within {margin} of the grid boundary")]
    SupportTooCloseToBoundary { margin: f64 },
    #[error("field is not solenoidal: relative divergence {0:e}")]
    NotSolenoidal(f64),
    #[error("dimension {0} too small for this operator")]
    DimensionTooSmall(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
