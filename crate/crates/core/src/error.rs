use thiserror::Error;

/// Errors produced anywhere in the solver pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("x = {x} nm lies outside the grid [{x_min}, {x_max}] nm")]
    OutOfDomain { x: f64, x_min: f64, x_max: f64 },

    #[error("barrier at {center} nm spans {samples} grid samples (need at least 3)")]
    BarrierUnderResolved { center: f64, samples: usize },

    #[error("barrier center {center} nm is not strictly inside the grid")]
    BarrierOutsideDomain { center: f64 },

    #[error("non-positive mass m_rel = {value} at sample {index}")]
    NonPositiveMass { index: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("requested {requested} modes but only {available} interior points exist")]
    ModeCountTooLarge { requested: usize, available: usize },

    #[error("eigensolver failed: {0}")]
    SolverFailure(String),

    #[error("cannot normalize an identically zero vector")]
    ZeroVector,

    #[error("barrier at {center} nm leaves fewer than 3 samples outside its support")]
    BarrierTooCloseToBoundary { center: f64 },

    #[error("energy must be positive, got {0} eV")]
    NonPositiveEnergy(f64),

    #[error("barrier strength alpha must be non-zero")]
    ZeroAlpha,

    #[error("energy {energy} eV collides with base level {index} ({base} eV)")]
    EnergyCollision {
        energy: f64,
        index: usize,
        base: f64,
    },

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
