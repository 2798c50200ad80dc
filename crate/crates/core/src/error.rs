use thiserror::Error;

/// Errors raised by the symbolic engine, the grid oracle and the classical integrator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid physical parameters: {0}")]
    InvalidParams(String),

    #[error("cyclotron frequency is zero; no magnetic length scale")]
    ZeroCyclotron,

    #[error("the zero function cannot be used here")]
    ZeroFunction,

    #[error("quadratic exponents differ; the sum leaves the Gaussian-polynomial class")]
    ExponentMismatch,

    #[error("Hermite degree {n} exceeds the cap {cap}")]
    HermiteCap { n: u32, cap: u32 },

    #[error("ladder depth {j} exceeds the cap {cap}")]
    LadderCap { j: u32, cap: u32 },

    #[error("state for level {n} is not an eigenfunction (residual {residual:e})")]
    NotEigenstate { n: u32, residual: f64 },

    #[error("finite-difference stencil supports derivative order <= 2 per axis, got {0}")]
    StencilOrder(u32),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("exponent overflows at node ({x}, {y})")]
    Overflow { x: f64, y: f64 },

    #[error("tolerance must lie in (0, 0.5), got {0}")]
    InvalidTolerance(f64),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed CSV: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;
