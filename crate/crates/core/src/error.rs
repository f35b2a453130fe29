use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error(
        "matrix is too close to singular (eigenvalue ratio {ratio:.3e}); \
         extraction needs a full-rank marginal"
    )]
    Singular { ratio: f64 },

    #[error("not a state: {0}")]
    InvalidState(String),

    #[error("not an effect: {0}")]
    InvalidEffect(String),

    #[error("not a channel: {0}")]
    InvalidChannel(String),

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("validity {0:.3e} is too small to condition on")]
    ZeroValidity(f64),

    #[error("first marginal has no mass at label {label:?}; extraction needs full support")]
    Support { label: String },

    #[error("channel is not unital; state image has trace {trace:.6} and was not normalized")]
    Subnormalized { trace: f64 },

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
