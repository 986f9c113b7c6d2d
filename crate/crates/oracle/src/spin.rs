//! Exact diagonalization of the spatially extended spin-boson model and
//! collective-operator commutator checks.
//!
//! The model couples one bosonic mode to N two-level atoms at positions
//! entering only through phases θ_j: `H = ω a†a + ω₀ Σ_j σ_ee^j +
//! (λ/√N) Σ_j (a† e^{−iθ_j} + a e^{+iθ_j}) σ_x^j`, counter-rotating terms
//! included. The basis is {photon number} ⊗ {atomic bit strings}, photon
//! index slowest, bit j set meaning atom j excited.

use ndarray::Array2;
use ndarray_linalg::{EigValsh, UPLO};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::OracleError;
use crate::fock::DEFAULT_DIM_CAP;

/// Maximum atom count for exact diagonalization; the commutator checks
/// have no such limit (they cost O(N)).
pub const MAX_ED_ATOMS: usize = 8;

/// Atom phases and the photon-space truncation.
#[derive(Debug, Clone)]
pub struct SpinEnsemble {
    phases: Vec<f64>,
    photon_cutoff: usize,
}

impl SpinEnsemble {
    /// One phase per atom; cutoff is the largest retained photon number.
    pub fn new(phases: Vec<f64>, photon_cutoff: usize) -> Result<Self, OracleError> {
        if phases.is_empty() {
            return Err(OracleError::InvalidInput("no atoms".into()));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(OracleError::InvalidInput("phases must be finite".into()));
        }
        if photon_cutoff < 1 {
            return Err(OracleError::InvalidInput(
                "photon cutoff must be at least 1".into(),
            ));
        }
        Ok(Self {
            phases,
            photon_cutoff,
        })
    }

    /// Uniform random phases in [0, 2π), reproducible from the seed.
    pub fn uniform_random(
        n_atoms: usize,
        photon_cutoff: usize,
        seed: u64,
    ) -> Result<Self, OracleError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phases = (0..n_atoms)
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        Self::new(phases, photon_cutoff)
    }

    /// Evenly spaced phases θ_j = 2πj/N.
    pub fn evenly_spaced(n_atoms: usize, photon_cutoff: usize) -> Result<Self, OracleError> {
        let phases = (0..n_atoms)
            .map(|j| std::f64::consts::TAU * j as f64 / n_atoms as f64)
            .collect();
        Self::new(phases, photon_cutoff)
    }

    /// The same ensemble with every phase shifted by `s` (a global
    /// translation of the atomic positions).
    pub fn translated(&self, s: f64) -> Result<Self, OracleError> {
        Self::new(
            self.phases.iter().map(|p| p + s).collect(),
            self.photon_cutoff,
        )
    }

    pub fn n_atoms(&self) -> usize {
        self.phases.len()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn photon_cutoff(&self) -> usize {
        self.photon_cutoff
    }

    /// Hilbert dimension (cutoff + 1) · 2^N.
    pub fn dimension(&self) -> usize {
        (self.photon_cutoff + 1) << self.phases.len()
    }
}

/// Dense Hamiltonian in the product basis, index = n_ph · 2^N + bits.
fn assemble(
    omega: f64,
    omega0: f64,
    lambda: f64,
    ensemble: &SpinEnsemble,
) -> Array2<Complex64> {
    let n = ensemble.n_atoms();
    let n_spin = 1usize << n;
    let n_ph = ensemble.photon_cutoff + 1;
    let dim = n_ph * n_spin;
    let couplings: Vec<Complex64> = ensemble
        .phases
        .iter()
        .map(|&th| {
            (lambda / (n as f64).sqrt()) * Complex64::from_polar(1.0, -th)
        })
        .collect();

    let mut h = Array2::<Complex64>::zeros((dim, dim));
    for nph in 0..n_ph {
        for bits in 0..n_spin {
            let col = nph * n_spin + bits;
            let excited = (bits as u32).count_ones() as f64;
            h[[col, col]] += Complex64::new(omega * nph as f64 + omega0 * excited, 0.0);

            // (λ/√N) a† e^{−iθ_j} σ_x^j : raise the photon, flip atom j.
            if nph + 1 < n_ph {
                for (j, g) in couplings.iter().enumerate() {
                    let flipped = bits ^ (1 << j);
                    let row = (nph + 1) * n_spin + flipped;
                    let amp = *g * (nph as f64 + 1.0).sqrt();
                    h[[row, col]] += amp;
                    h[[col, row]] += amp.conj();
                }
            }
        }
    }
    h
}

/// Lowest `k_lowest` eigenvalues (ascending) of the spin-boson model.
pub fn spin_ed(
    omega: f64,
    omega0: f64,
    lambda: f64,
    ensemble: &SpinEnsemble,
    k_lowest: usize,
) -> Result<Vec<f64>, OracleError> {
    if !omega.is_finite() || !omega0.is_finite() || !lambda.is_finite() {
        return Err(OracleError::InvalidInput(
            "parameters must be finite".into(),
        ));
    }
    if ensemble.n_atoms() > MAX_ED_ATOMS {
        return Err(OracleError::InvalidInput(format!(
            "exact diagonalization supports at most {MAX_ED_ATOMS} atoms, got {}",
            ensemble.n_atoms()
        )));
    }
    let dim = ensemble.dimension();
    if dim > DEFAULT_DIM_CAP {
        return Err(OracleError::Resource {
            dim,
            cap: DEFAULT_DIM_CAP,
        });
    }
    if k_lowest == 0 || k_lowest > dim {
        return Err(OracleError::InvalidInput(format!(
            "k_lowest = {k_lowest} outside 1..={dim}"
        )));
    }

    let h = assemble(omega, omega0, lambda, ensemble);

    // Hermiticity guard on the assembled matrix.
    let mut max_abs = 0.0f64;
    let mut max_dev = 0.0f64;
    for i in 0..dim {
        for j in i..dim {
            max_abs = max_abs.max(h[[i, j]].norm());
            max_dev = max_dev.max((h[[i, j]] - h[[j, i]].conj()).norm());
        }
    }
    if max_dev > 1e-12 * max_abs.max(1.0) {
        return Err(OracleError::NumericCheck(format!(
            "hermiticity violated: {max_dev}"
        )));
    }

    let values = h
        .eigvalsh(UPLO::Lower)
        .map_err(|e| OracleError::Lapack(e.to_string()))?;
    Ok(values.iter().take(k_lowest).copied().collect())
}

/// All-atoms-ground expectation values of the collective commutators
/// `⟨[B, B†]⟩` and `⟨[B, C†]⟩`, where `B = (1/√N) Σ_j e^{−iθ_j} σ_ge^j`
/// and `C = (1/√N) Σ_j e^{+iθ_j} σ_ge^j`.
///
/// The operator algebra is applied first: `[σ_ge^j, σ_eg^k] =
/// δ_jk (σ_gg − σ_ee)^j`, whose ground expectation is 1, leaving pure
/// phase sums. Only those sums are evaluated numerically, so bb_dag is
/// exactly 1 and bc_dag = (1/N) Σ_j e^{−2iθ_j}.
pub fn collective_commutators(ensemble: &SpinEnsemble) -> (Complex64, Complex64) {
    let n = ensemble.n_atoms() as f64;
    let mut bb = Complex64::new(0.0, 0.0);
    let mut bc = Complex64::new(0.0, 0.0);
    for &th in &ensemble.phases {
        // [B, B†]: phases cancel atomwise, e^{−iθ}·e^{+iθ} = 1.
        bb += Complex64::new(1.0, 0.0);
        // [B, C†]: both carry e^{−iθ}.
        bc += Complex64::from_polar(1.0, -2.0 * th);
    }
    (bb / n, bc / n)
}
