use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("empty generator list")]
    EmptyGenerators,

    #[error("invalid leg index {leg} for a space with {legs} legs")]
    InvalidLeg { leg: usize, legs: usize },

    #[error("invalid group table: {0}")]
    InvalidGroupTable(String),

    #[error("group is not abelian: {0}")]
    NotAbelian(String),

    /// An identity that must hold failed numerically.
    #[error("{equation} violated: residual {residual:e} exceeds {tolerance:e}")]
    Invariant {
        equation: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("element is not in {space}: residual {residual:e}")]
    NotAMember { space: String, residual: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("quantum group mismatch: {0} vs {1}")]
    GroupMismatch(String, String),

    #[error("unknown builtin {kind} '{name}'")]
    UnknownBuiltin { kind: &'static str, name: String },

    #[error("malformed input: {0}")]
    Input(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invariant(equation: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Error::Invariant {
            equation: equation.into(),
            residual,
            tolerance,
        }
    }
}

/// Fails with [`Error::Invariant`] when `residual` exceeds `tolerance` (or is not finite).
pub(crate) fn ensure(equation: &str, residual: f64, tolerance: f64) -> Result<()> {
    if residual.is_finite() && residual <= tolerance {
        Ok(())
    } else {
        Err(Error::invariant(equation, residual, tolerance))
    }
}
