//! Error types, one enum per subsystem.

use crate::grid::Representation;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("points per axis must be a power of two >= 8, got {0}")]
    NotPowerOfTwo(usize),
    #[error("dimension must be >= 1, got {0}")]
    BadDimension(usize),
    #[error(
        "grid of dimension {dim} with {points_per_axis} points per axis exceeds the memory cap"
    )]
    MemoryCap { dim: usize, points_per_axis: usize },
    #[error("box radius must be positive and finite")]
    BadBoxRadius,
    #[error("field is in {have:?} representation, operation needs {want:?}")]
    RepresentationMismatch {
        have: Representation,
        want: Representation,
    },
    #[error("value vector has length {got}, grid has {expected} points")]
    LengthMismatch { expected: usize, got: usize },
    #[error("fields live on different grids or representations")]
    IncompatibleFields,
    #[error("Lp exponent must satisfy 1 <= p <= inf, got {0}")]
    BadExponent(f64),
    #[error("multiplier produced a non-finite value")]
    NonFiniteMultiplier,
    #[error("serialization supports uniform grids only")]
    AnisotropicSerialization,
    #[error("bad magic bytes in field stream")]
    BadMagic,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum XbError {
    #[error("rotation matrix is not orthogonal (deviation {0:.3e})")]
    NotOrthogonal(f64),
    #[error("tau must be >= 1, got {0}")]
    BadTau(f64),
    #[error("homogeneous weight singular near the characteristic set (min |p| = {min_abs_p:.3e}, guard = {guard:.3e})")]
    NearCharacteristicSingularity { min_abs_p: f64, guard: f64 },
    #[error("power iteration did not converge within {iters} iterations (last relative change {last_change:.3e})")]
    NonConvergence { iters: usize, last_change: f64 },
    #[error("input field contains non-finite values")]
    NonFiniteInput,
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Error)]
pub enum CgoError {
    #[error("conductivity drops below its stated lower bound ({min} < {bound})")]
    PositivityViolation { min: f64, bound: f64 },
    #[error("residual grew over {0} consecutive iterations")]
    Divergence(usize),
    #[error("no convergence after {iters} iterations (residual {residual:.3e})")]
    MaxIterExceeded { iters: usize, residual: f64 },
    #[error("field support violates the unit-ball hypothesis (mass fraction {0:.3e} outside)")]
    SupportViolation(f64),
    #[error("need at least 20 samples, got {0}")]
    TooFewSamples(usize),
    #[error("rescaled support exceeds the lattice")]
    ResolutionLoss,
    #[error("rotation does not map the frequency lattice to itself")]
    LatticeIncompatibleRotation,
    #[error(transparent)]
    Xb(#[from] XbError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Error)]
pub enum RestrictionError {
    #[error("point lies outside the surface domain (|xi'| = {0})")]
    DomainViolation(f64),
    #[error("hemisphere domain radius must stay below 1/sqrt(2) + 1/10, got {0}")]
    BadHemisphereRadius(f64),
    #[error("neighborhood width {width} is below two frequency spacings ({spacing})")]
    ResolutionLoss { width: f64, spacing: f64 },
    #[error("construction invalid in this (mu, nu) regime: {0}")]
    RegimeViolation(String),
    #[error("denominator norm is zero")]
    ZeroDenominator,
    #[error("need at least {need} dyadic levels per axis, got {got}")]
    InsufficientLevels { need: usize, got: usize },
    #[error("supports are separated by {0}, need at least 0.5")]
    SeparationViolation(f64),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Error)]
pub enum WavePacketError {
    #[error("cap radius {0} is below two lattice spacings")]
    ResolutionLoss(f64),
    #[error("no tubes in the requested class")]
    EmptyClass,
    #[error(transparent)]
    Restriction(#[from] RestrictionError),
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config parse error at line {line}: {msg}")]
    ConfigParse { line: usize, msg: String },
    #[error("output location not writable: {0}")]
    Unwritable(String),
    #[error("result table is empty")]
    EmptyTable,
    #[error("assertion failed: {0}")]
    AssertionFailed(String),
    #[error("{context}: {source}")]
    Module {
        context: String,
        #[source]
        source: Box<dyn std::error::Error + Send + Sync>,
    },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl ExperimentError {
    pub fn module<E: std::error::Error + Send + Sync + 'static>(
        context: impl Into<String>,
        e: E,
    ) -> Self {
        ExperimentError::Module {
            context: context.into(),
            source: Box::new(e),
        }
    }
}
