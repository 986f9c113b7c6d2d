//! Quadratic bosonic forms and their symplectic diagonalization.
//!
//! A form `H = Σ A_ij a_i†a_j + ½ Σ (B_ij a_i†a_j† + h.c.) + c0` is stored
//! as `(A, B, c0)`. In the doubled basis `U = (a₁..a_m, a₁†..a_m†)ᵀ` it
//! reads `H = ½ U†MU − ½ tr A + c0` with `M = [[A, B], [B*, A*]]`. The
//! excitation spectrum is the eigenproblem of `ηM`, `η = diag(I, −I)`:
//! eigenvalues come in `(μ, −μ)` pairs, and for real pairs the physical
//! member is the one whose eigenvector has positive Krein norm `v†ηv`.
//! Complex pairs (vanishing Krein norm) and zero modes signal instability
//! and symmetry breaking respectively and are reported with sign 0.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::eig::{eig_general, MAX_EIG_DIM};
use crate::error::CoreError;

/// An m-mode quadratic bosonic Hamiltonian `(A, B, c0)`.
#[derive(Debug, Clone)]
pub struct QuadraticBosonForm {
    n_modes: usize,
    a: Array2<Complex64>,
    b: Array2<Complex64>,
    c0: f64,
}

impl QuadraticBosonForm {
    /// Validates shapes, finiteness, Hermiticity of `A` (within
    /// `1e-12·max|A|`) and symmetry of `B` (within `1e-12·max|B|`).
    pub fn new(
        a: Array2<Complex64>,
        b: Array2<Complex64>,
        c0: f64,
    ) -> Result<Self, CoreError> {
        let (ra, ca) = a.dim();
        let (rb, cb) = b.dim();
        if ra != ca || rb != cb || ra != rb {
            return Err(CoreError::Dimension(format!(
                "A is {ra}x{ca}, B is {rb}x{cb}; both must be m x m"
            )));
        }
        let m = ra;
        if m == 0 || 2 * m > MAX_EIG_DIM {
            return Err(CoreError::Dimension(format!(
                "mode count {m} outside 1..={}",
                MAX_EIG_DIM / 2
            )));
        }
        if !a.iter().chain(b.iter()).all(|z| z.re.is_finite() && z.im.is_finite())
            || !c0.is_finite()
        {
            return Err(CoreError::NonFinite("quadratic form"));
        }
        let max_a = max_abs(&a);
        let max_b = max_abs(&b);
        for i in 0..m {
            for j in 0..m {
                if (a[[i, j]] - a[[j, i]].conj()).norm() > 1e-12 * max_a {
                    return Err(CoreError::Symmetry("Hermitian (A)"));
                }
                if (b[[i, j]] - b[[j, i]]).norm() > 1e-12 * max_b {
                    return Err(CoreError::Symmetry("symmetric (B)"));
                }
            }
        }
        Ok(Self { n_modes: m, a, b, c0 })
    }

    /// Number of bosonic modes m.
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// The Hermitian coefficient matrix `A`.
    pub fn a_matrix(&self) -> &Array2<Complex64> {
        &self.a
    }

    /// The symmetric anomalous-coupling matrix `B`.
    pub fn b_matrix(&self) -> &Array2<Complex64> {
        &self.b
    }

    /// The scalar offset `c0`.
    pub fn c0(&self) -> f64 {
        self.c0
    }

    /// The 2m×2m Hermitian matrix `M = [[A, B], [B*, A*]]`.
    pub fn m_matrix(&self) -> Array2<Complex64> {
        let m = self.n_modes;
        let mut out = Array2::zeros((2 * m, 2 * m));
        for i in 0..m {
            for j in 0..m {
                out[[i, j]] = self.a[[i, j]];
                out[[i, j + m]] = self.b[[i, j]];
                out[[i + m, j]] = self.b[[i, j]].conj();
                out[[i + m, j + m]] = self.a[[i, j]].conj();
            }
        }
        out
    }

    /// `ηM` with `η = diag(I, −I)`: the dynamical matrix whose eigenvalues
    /// are the quasiparticle frequencies `±ω`.
    pub fn eta_m(&self) -> Array2<Complex64> {
        let m = self.n_modes;
        let mut out = self.m_matrix();
        for i in m..2 * m {
            for j in 0..2 * m {
                out[[i, j]] = -out[[i, j]];
            }
        }
        out
    }
}

/// Assembles `M = [[A, B], [B*, A*]]` for a validated form.
pub fn build_m_matrix(form: &QuadraticBosonForm) -> Array2<Complex64> {
    form.m_matrix()
}

/// Stability classes of a quadratic form, ordered by severity of diagnosis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// All frequencies real and strictly positive: stable normal spectrum.
    AllPositive,
    /// At least one vanishing frequency (broken continuous symmetry).
    HasZero,
    /// A real negative Krein-selected frequency: energetic instability.
    HasNegative,
    /// Frequencies with nonzero imaginary part: dynamical instability.
    HasComplex,
}

impl Classification {
    /// Physical phases are those with a real, non-negative spectrum.
    pub fn is_physical(self) -> bool {
        matches!(self, Classification::AllPositive | Classification::HasZero)
    }

    /// Stable name for error messages and serialization.
    pub fn name(self) -> &'static str {
        match self {
            Classification::AllPositive => "AllPositive",
            Classification::HasZero => "HasZero",
            Classification::HasNegative => "HasNegative",
            Classification::HasComplex => "HasComplex",
        }
    }
}

/// Krein-resolved spectrum of a quadratic form.
#[derive(Debug, Clone)]
pub struct BogoliubovSpectrum {
    /// One frequency per mode, sorted by descending real part (ties by
    /// descending imaginary part).
    pub frequencies: Vec<Complex64>,
    /// Krein signature of each reported frequency: +1 for a positive-norm
    /// real mode, 0 for zero modes and complex pairs.
    pub krein_signs: Vec<i8>,
    /// Stability classification per the tolerance rules.
    pub classification: Classification,
    /// Canonical transformation, populated by [`bogoliubov_transform`].
    pub transformation: Option<Array2<Complex64>>,
    tol_zero: f64,
    tol_im: f64,
}

impl BogoliubovSpectrum {
    /// Zero-frequency threshold used when this spectrum was classified.
    pub fn tol_zero(&self) -> f64 {
        self.tol_zero
    }

    /// Imaginary-part threshold used when this spectrum was classified.
    pub fn tol_im(&self) -> f64 {
        self.tol_im
    }
}

/// One analyzed `(μ, −μ)` pair.
struct ModeEntry {
    freq: Complex64,
    krein: i8,
    vector: Option<Array1<Complex64>>,
}

/// Diagonalizes `ηM` and reports one Krein-selected frequency per mode.
///
/// `tol_zero` declares a pair a zero mode when both members have modulus
/// at or below it; `tol_im` separates real pairs from complex ones.
pub fn bogoliubov_spectrum(
    form: &QuadraticBosonForm,
    tol_zero: f64,
    tol_im: f64,
) -> Result<BogoliubovSpectrum, CoreError> {
    if !(tol_zero > 0.0) || !(tol_im > 0.0) {
        return Err(CoreError::InvalidInput(
            "tolerances must be strictly positive".into(),
        ));
    }
    let entries = analyze_modes(form, tol_zero, tol_im)?;
    let frequencies: Vec<Complex64> = entries.iter().map(|e| e.freq).collect();
    let krein_signs: Vec<i8> = entries.iter().map(|e| e.krein).collect();
    let classification = classify(&frequencies, tol_zero, tol_im);
    Ok(BogoliubovSpectrum {
        frequencies,
        krein_signs,
        classification,
        transformation: None,
        tol_zero,
        tol_im,
    })
}

/// Classification from the reported frequency list alone.
fn classify(frequencies: &[Complex64], tol_zero: f64, tol_im: f64) -> Classification {
    if frequencies.iter().any(|w| w.im.abs() > tol_im) {
        Classification::HasComplex
    } else if frequencies.iter().any(|w| w.norm() <= tol_zero) {
        Classification::HasZero
    } else if frequencies.iter().any(|w| w.re < -tol_zero) {
        Classification::HasNegative
    } else {
        Classification::AllPositive
    }
}

/// Full pair analysis: eigensolve, (μ, −μ) matching, Krein selection,
/// descending sort.
fn analyze_modes(
    form: &QuadraticBosonForm,
    tol_zero: f64,
    tol_im: f64,
) -> Result<Vec<ModeEntry>, CoreError> {
    let m = form.n_modes;
    let k = form.eta_m();
    let eig = eig_general(&k)?;

    let scale = max_abs(&form.a).max(max_abs(&form.b)).max(f64::MIN_POSITIVE);
    let tol_match = tol_zero.max(1e-9 * scale);

    // Greedy nearest-(−μ) matching, largest moduli first so well-separated
    // pairs are claimed before near-zero ones.
    let n = 2 * m;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.values[j]
            .norm()
            .partial_cmp(&eig.values[i].norm())
            .expect("finite eigenvalues")
    });
    let mut used = vec![false; n];
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(m);
    for &i in &order {
        if used[i] {
            continue;
        }
        used[i] = true;
        let target = -eig.values[i];
        let mut best: Option<(usize, f64)> = None;
        for (j, flag) in used.iter().enumerate() {
            if *flag {
                continue;
            }
            let d = (eig.values[j] - target).norm();
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        match best {
            Some((j, d)) if d <= tol_match => {
                used[j] = true;
                pairs.push((i, j));
            }
            _ => {
                return Err(CoreError::UnpairedEigenvalue {
                    value: eig.values[i],
                    tol: tol_match,
                })
            }
        }
    }

    let mut entries: Vec<ModeEntry> = Vec::with_capacity(m);
    for (i, j) in pairs {
        let (mu_i, mu_j) = (eig.values[i], eig.values[j]);
        // Representative of the pair: lexicographically larger by (Re, Im).
        let (rep_idx, rep) = if (mu_i.re, mu_i.im) >= (mu_j.re, mu_j.im) {
            (i, mu_i)
        } else {
            (j, mu_j)
        };
        let real_pair = mu_i.im.abs() <= tol_im && mu_j.im.abs() <= tol_im;
        if real_pair && mu_i.norm().max(mu_j.norm()) <= tol_zero {
            entries.push(ModeEntry {
                freq: rep,
                krein: 0,
                vector: None,
            });
        } else if real_pair {
            let s_i = eta_norm(&eig.vectors, i, m);
            let s_j = eta_norm(&eig.vectors, j, m);
            let (sel, s) = if s_i >= s_j { (i, s_i) } else { (j, s_j) };
            if s <= 1e-10 {
                // Krein-degenerate pair (coalescing at an exceptional
                // point): no positive-norm member to select.
                entries.push(ModeEntry {
                    freq: rep,
                    krein: 0,
                    vector: None,
                });
            } else {
                entries.push(ModeEntry {
                    freq: eig.values[sel],
                    krein: 1,
                    vector: Some(eig.vectors.column(sel).to_owned()),
                });
            }
        } else {
            let _ = rep_idx;
            entries.push(ModeEntry {
                freq: rep,
                krein: 0,
                vector: None,
            });
        }
    }

    entries.sort_by(|a, b| {
        (b.freq.re, b.freq.im)
            .partial_cmp(&(a.freq.re, a.freq.im))
            .expect("finite frequencies")
    });
    Ok(entries)
}

/// Krein norm `v†ηv` of eigenvector column `col` (real by construction).
fn eta_norm(vectors: &Array2<Complex64>, col: usize, m: usize) -> f64 {
    let mut s = 0.0;
    for r in 0..2 * m {
        let mag = vectors[[r, col]].norm_sqr();
        if r < m {
            s += mag;
        } else {
            s -= mag;
        }
    }
    s
}

fn max_abs(m: &Array2<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Builds the canonical transformation `T` for a stable form: `T η T† η = 1`,
/// `T* = γ̂ T γ̂`, and `T·(ηM)·T⁻¹ = diag(ω, −ω)`.
///
/// Requires `spectrum.classification == AllPositive`; zero modes have
/// vanishing η-norm and admit no normalized column, unstable spectra no
/// canonical form at all.
pub fn bogoliubov_transform(
    form: &QuadraticBosonForm,
    spectrum: &BogoliubovSpectrum,
) -> Result<Array2<Complex64>, CoreError> {
    match spectrum.classification {
        Classification::AllPositive => {}
        Classification::HasZero => return Err(CoreError::ZeroMode),
        Classification::HasNegative => return Err(CoreError::UnstableForm("HasNegative")),
        Classification::HasComplex => return Err(CoreError::UnstableForm("HasComplex")),
    }
    let m = form.n_modes;
    let entries = analyze_modes(form, spectrum.tol_zero, spectrum.tol_im)?;

    // η-orthonormalize the Krein-positive vectors (Gram-Schmidt in the η
    // inner product); only degenerate clusters genuinely need it, but a
    // full pass is cheap and keeps exact degeneracy safe.
    let mut basis: Vec<Array1<Complex64>> = Vec::with_capacity(m);
    for e in &entries {
        let mut v = e
            .vector
            .clone()
            .ok_or(CoreError::ZeroMode)?;
        for w in &basis {
            let proj = eta_inner(w, &v, m);
            for r in 0..2 * m {
                let upd = w[r] * proj;
                v[r] -= upd;
            }
        }
        let s = eta_inner(&v, &v, m).re;
        if s <= 1e-12 {
            return Err(CoreError::ZeroMode);
        }
        let inv = 1.0 / s.sqrt();
        for r in 0..2 * m {
            v[r] = v[r] * inv;
        }
        basis.push(v);
    }

    // S = [V, γ̂V*] diagonalizes from the right; T = ηS†η inverts it
    // without any numerical inversion.
    let mut s_mat: Array2<Complex64> = Array2::zeros((2 * m, 2 * m));
    for (idx, v) in basis.iter().enumerate() {
        for r in 0..2 * m {
            s_mat[[r, idx]] = v[r];
            // γ̂ swaps the upper and lower blocks of the conjugate.
            let swapped = if r < m { v[r + m].conj() } else { v[r - m].conj() };
            s_mat[[r, idx + m]] = swapped;
        }
    }
    let mut t = Array2::zeros((2 * m, 2 * m));
    for i in 0..2 * m {
        let si = if i < m { 1.0 } else { -1.0 };
        for j in 0..2 * m {
            let sj = if j < m { 1.0 } else { -1.0 };
            t[[i, j]] = s_mat[[j, i]].conj() * (si * sj);
        }
    }

    verify_transform(form, &entries, &t, &s_mat)?;
    Ok(t)
}

/// Verifies the three transformation contracts; construction should satisfy
/// them to machine precision, so failure indicates a genuine defect.
fn verify_transform(
    form: &QuadraticBosonForm,
    entries: &[ModeEntry],
    t: &Array2<Complex64>,
    s_mat: &Array2<Complex64>,
) -> Result<(), CoreError> {
    let m = form.n_modes;
    let n = 2 * m;

    // T η T† η = I.
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let sj = if j < m { 1.0 } else { -1.0 };
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                let sk = if k < m { 1.0 } else { -1.0 };
                acc += t[[i, k]] * sk * t[[j, k]].conj() * sj;
            }
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((acc - Complex64::new(target, 0.0)).norm());
        }
    }
    if worst > 1e-10 {
        return Err(CoreError::NumericCheck(format!(
            "TηT†η deviates from identity by {worst:.3e}"
        )));
    }

    // T* = γ̂ T γ̂ (exact by construction up to copied rounding).
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let gi = if i < m { i + m } else { i - m };
            let gj = if j < m { j + m } else { j - m };
            worst = worst.max((t[[i, j]].conj() - t[[gi, gj]]).norm());
        }
    }
    if worst > 1e-10 {
        return Err(CoreError::NumericCheck(format!(
            "T* − γ̂Tγ̂ deviates by {worst:.3e}"
        )));
    }

    // T (ηM) S = diag(ω, −ω) with S = T⁻¹.
    let k = form.eta_m();
    let km = mat_mul(&k, s_mat);
    let diag = mat_mul(t, &km);
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j {
                let w = entries[i % m].freq;
                if i < m {
                    w
                } else {
                    -w
                }
            } else {
                Complex64::new(0.0, 0.0)
            };
            worst = worst.max((diag[[i, j]] - target).norm());
        }
    }
    if worst > 1e-8 {
        return Err(CoreError::NumericCheck(format!(
            "T(ηM)T⁻¹ deviates from diag(ω, −ω) by {worst:.3e}"
        )));
    }
    Ok(())
}

fn mat_mul(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    a.dot(b)
}

/// η inner product `u†ηv` over the doubled basis.
fn eta_inner(u: &Array1<Complex64>, v: &Array1<Complex64>, m: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..2 * m {
        let s = if r < m { 1.0 } else { -1.0 };
        acc += u[r].conj() * v[r] * s;
    }
    acc
}

/// Ground-state energy `½ Σ Re ω_i − ½ Re tr A + c0`; zero modes (Krein
/// sign 0 in a HasZero spectrum) contribute nothing.
pub fn ground_energy(
    form: &QuadraticBosonForm,
    spectrum: &BogoliubovSpectrum,
) -> Result<f64, CoreError> {
    if !spectrum.classification.is_physical() {
        return Err(CoreError::UnphysicalPhase(spectrum.classification.name()));
    }
    let sum: f64 = spectrum
        .frequencies
        .iter()
        .zip(&spectrum.krein_signs)
        .filter(|(_, &k)| k != 0)
        .map(|(w, _)| w.re)
        .sum();
    let tr_a: f64 = (0..form.n_modes).map(|i| form.a[[i, i]].re).sum();
    Ok(0.5 * sum - 0.5 * tr_a + form.c0)
}
