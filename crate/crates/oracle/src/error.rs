use thiserror::Error;

/// Failures of the exact-diagonalization oracles.
#[derive(Debug, Error)]
pub enum OracleError {
    /// The requested Hilbert-space dimension exceeds the configured cap.
    #[error("hilbert dimension {dim} exceeds the cap {cap}")]
    Resource { dim: usize, cap: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The dense eigensolver backend reported a failure.
    #[error("lapack error: {0}")]
    Lapack(String),

    /// A check on an assembled matrix failed (non-Hermitian entries or
    /// non-finite values).
    #[error("numeric check failed: {0}")]
    NumericCheck(String),

    #[error(transparent)]
    Core(#[from] dicke_core::CoreError),
}
