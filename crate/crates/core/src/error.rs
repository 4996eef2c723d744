use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FsiError {
    #[error("mesh at rate {rate} would have {nodes} nodes, above the cap of {cap}")]
    MeshTooLarge { rate: u32, nodes: usize, cap: usize },

    #[error("domain length {length} is not an integer multiple of h = {h}")]
    IncommensurateMesh { length: f64, h: f64 },

    #[error("degenerate element with signed area {area:e}")]
    DegenerateElement { area: f64 },

    #[error("dof index {index} out of range for {n_dofs} dofs")]
    DofOutOfRange { index: usize, n_dofs: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("conflicting Dirichlet values for dof {dof}: {first} vs {second}")]
    ConflictingConstraint { dof: usize, first: f64, second: f64 },

    #[error("singular or rank-deficient linear system: {0}")]
    SingularMatrix(String),

    #[error("linear solve residual {residual:e} exceeds tolerance {tolerance:e}")]
    InaccurateSolve { residual: f64, tolerance: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("final time {t_final} is not a multiple of the step {tau}")]
    IncommensurateTime { t_final: f64, tau: f64 },

    #[error("non-positive error value {0} in order computation")]
    NonPositiveError(f64),

    #[error("grids are not nested: {coarse} coarse vs {fine} fine interface nodes")]
    NonNestedGrids { coarse: usize, fine: usize },

    #[error("reference displacement has zero energy norm")]
    ZeroReference,

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed file {path}: {reason}")]
    Malformed { path: PathBuf, reason: String },
}

impl FsiError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        FsiError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, FsiError>;
