//! Quadratic bosonic Hamiltonians of the extended Dicke model and their
//! symplectic (Bogoliubov) diagonalization.
//!
//! The crate is layered bottom-up:
//!
//! * [`eig`]: dense complex eigensolver for small general matrices
//!   (Hessenberg reduction + implicitly shifted QR), with residual
//!   verification of every accepted eigenpair.
//! * [`bogoliubov`]: quadratic forms `H = Σ A_ij a_i†a_j + ½Σ(B_ij a_i†a_j†
//!   + h.c.) + c0`, the ηM eigenproblem, Krein-signature mode selection,
//!   stability classification, canonical transformations, ground energies.
//! * [`dicke`]: the model-specific forms, normal phase and the four
//!   super-radiant branches, classical displacement energy, order parameter.
//! * [`criticality`]: λ sweeps, phase-boundary bisection, power-law
//!   exponent fits, energy-density curves and their derivative jumps.

pub mod bogoliubov;
pub mod criticality;
pub mod dicke;
pub mod eig;
pub mod error;

// When the workspace is built as a whole, ndarray's blas backend is
// enabled by a sibling crate and matrix products lower to cblas calls;
// unit-test binaries must link the provider explicitly.
#[cfg(test)]
use openblas_src as _;

pub use bogoliubov::{
    bogoliubov_spectrum, bogoliubov_transform, build_m_matrix, ground_energy, BogoliubovSpectrum,
    Classification, QuadraticBosonForm,
};
pub use criticality::{
    energy_density_curve, find_complex_onset, find_critical, fit_points, fit_power_law,
    lambda_grid, log_spaced_offsets, second_derivative_jump, sweep, CriticalPoint, DerivativeJump,
    FitResult, FitTarget, SweepRecord, Tolerances,
};
pub use dicke::{
    branch_coefficients, branch_form, classical_energy, normal_form, order_parameter,
    superradiant_form, Branch, BranchCoefficients, ModelParams,
};
pub use error::CoreError;
