//! Brute-force validators for the symplectic engine and the underlying
//! spin model.
//!
//! Nothing here shares numerics with `dicke-core`: quadratic forms are
//! diagonalized directly in truncated Fock space ([`fock_ed`]), the full
//! spin-boson Hamiltonian at small atom number is diagonalized exactly
//! ([`spin_ed`]), and the bosonization premise is checked through
//! collective-operator commutators ([`collective_commutators`]).

pub mod error;
pub mod fock;
pub mod spin;

pub use error::OracleError;
pub use fock::{fock_ed, FockSpec, DEFAULT_DIM_CAP};
pub use spin::{collective_commutators, spin_ed, SpinEnsemble, MAX_ED_ATOMS};
