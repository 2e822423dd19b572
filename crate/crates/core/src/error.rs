use crate::multiindex::MultiIndex;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("multi-index {beta} is not componentwise below {alpha}")]
    NotBelow { alpha: MultiIndex, beta: MultiIndex },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resolution budget exceeded: {0}")]
    Resolution(String),

    #[error("Neumann source must be mean-zero, residual mean {mean:e}")]
    NonzeroMean { mean: f64 },

    #[error("velocity is not divergence free (relative residual {residual:e})")]
    NotDivergenceFree { residual: f64 },

    #[error("time step {dt} exceeds the CFL bound {bound}")]
    Cfl { dt: f64, bound: f64 },

    #[error("fit window holds {found} populated shells, at least 3 are required")]
    InsufficientShells { found: usize },

    #[error("geometry mismatch: {0}")]
    Geometry(String),

    #[error("floating-point overflow: {0}")]
    Overflow(String),

    #[error("step rejected: {0}")]
    StepRejected(String),

    #[error("snapshot format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
