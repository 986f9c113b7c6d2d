//! Error type shared by all core modules.

use num_complex::Complex64;
use thiserror::Error;

/// Failure modes of the engine, the model constructors, and the
/// criticality layer.
#[derive(Debug, Error)]
pub enum CoreError {
    /// Matrix or argument dimensions are inconsistent or out of range.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// An input contains NaN or infinite entries.
    #[error("non-finite values in {0}")]
    NonFinite(&'static str),

    /// A matrix fails its required (Hermitian or symmetric) structure.
    #[error("matrix violates {0} symmetry beyond tolerance")]
    Symmetry(&'static str),

    /// QR iteration exhausted its sweep budget.
    #[error("eigensolver failed to converge after {sweeps} QR sweeps")]
    Convergence { sweeps: usize },

    /// A computed eigenpair fails the residual bound `‖Av − μv‖ ≤ bound`.
    #[error("eigenpair {index}: residual {residual:.3e} exceeds bound {bound:.3e}")]
    Residual {
        index: usize,
        residual: f64,
        bound: f64,
    },

    /// A computed eigenvalue fails the determinant residual bound
    /// `|det(A − μI)| < 1e-6·‖A‖ⁿ` (compared in log space).
    #[error("eigenvalue {index}: log|det(A − μI)| = {log_det:.3} exceeds log bound {log_bound:.3}")]
    DeterminantResidual {
        index: usize,
        log_det: f64,
        log_bound: f64,
    },

    /// An ηM eigenvalue has no partner −μ within the matching tolerance.
    #[error("eigenvalue {value} has no partner -μ within {tol:.3e}")]
    UnpairedEigenvalue { value: Complex64, tol: f64 },

    /// A zero mode has vanishing η-norm, so no canonical transformation
    /// column can be normalized for it.
    #[error("zero mode present: η-norm vanishes, canonical transformation undefined")]
    ZeroMode,

    /// The form is dynamically unstable; no canonical transformation exists.
    #[error("form is unstable ({0}); canonical transformation undefined")]
    UnstableForm(&'static str),

    /// The spectrum classification does not describe a physical phase.
    #[error("classification {0} is not a physical phase")]
    UnphysicalPhase(&'static str),

    /// Super-radiant displacements do not exist below the critical coupling.
    #[error("displacements undefined: λ = {lambda} below critical coupling {lambda_c}")]
    DisplacementUndefined { lambda: f64, lambda_c: f64 },

    /// A depletion factor `N − β²` or `N − γ²` is not strictly positive.
    #[error("depletion factor {name} = {value} is not strictly positive")]
    Depletion { name: &'static str, value: f64 },

    /// A scalar argument lies outside the function's domain.
    #[error("out of domain: {0}")]
    Domain(String),

    /// Bisection bracket endpoints evaluate to the same predicate value.
    #[error("bracket ({lo}, {hi}) does not straddle the boundary")]
    Bracket { lo: f64, hi: f64 },

    /// Structurally invalid input (counts, orderings, empty data).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An internal self-check on a constructed object failed.
    #[error("numeric self-check failed: {0}")]
    NumericCheck(String),
}
