//! Property-based and analytic cross-checks of the symplectic engine.
//!
//! The checks here avoid the engine's own internals wherever possible:
//! transformation identities are recomputed with plain ndarray products,
//! and the normal-phase spectrum is compared against closed-form cubic
//! roots obtained by a test-local Cardano solver.

use ndarray::{Array2, ArrayView2};
use num_complex::Complex64;
// Links the system BLAS: with the workspace built as a whole, ndarray's
// blas backend is active and matrix products lower to cblas calls.
use openblas_src as _;
use proptest::prelude::*;

use dicke_core::{
    bogoliubov_spectrum, bogoliubov_transform, build_m_matrix, branch_form, normal_form,
    Branch, Classification, ModelParams, QuadraticBosonForm,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a guaranteed-stable 3-mode form from 72 raw floats: M₀ = G†G +
/// ¼I is positive definite, and averaging with γ̂M₀*γ̂ (γ̂ swaps the two
/// 3-blocks and conjugates) imposes the bosonic block structure without
/// losing definiteness. Positive definite M makes every eigenfrequency of
/// ηM real and bounded away from zero.
fn stable_form(raw: &[f64]) -> QuadraticBosonForm {
    assert_eq!(raw.len(), 72);
    let g = Array2::from_shape_fn((6, 6), |(i, j)| {
        c(raw[2 * (6 * i + j)], raw[2 * (6 * i + j) + 1])
    });
    let mut m0 = Array2::<Complex64>::zeros((6, 6));
    for i in 0..6 {
        for j in 0..6 {
            let mut s = c(0.0, 0.0);
            for k in 0..6 {
                s += g[[k, i]].conj() * g[[k, j]];
            }
            m0[[i, j]] = s;
        }
    }
    for i in 0..6 {
        m0[[i, i]] += 0.25;
    }
    // γ̂ M₀* γ̂ with γ̂ = [[0, I], [I, 0]].
    let swapped = Array2::from_shape_fn((6, 6), |(i, j)| m0[[(i + 3) % 6, (j + 3) % 6]].conj());
    let m = (&m0 + &swapped) * c(0.5, 0.0);
    let a = m.slice(ndarray::s![..3, ..3]).to_owned();
    let b = m.slice(ndarray::s![..3, 3..]).to_owned();
    QuadraticBosonForm::new(a, b, 0.0).expect("generator must produce a valid form")
}

fn eta(m: usize) -> Array2<Complex64> {
    Array2::from_shape_fn((2 * m, 2 * m), |(i, j)| {
        if i != j {
            c(0.0, 0.0)
        } else if i < m {
            c(1.0, 0.0)
        } else {
            c(-1.0, 0.0)
        }
    })
}

fn gamma_swap(m: usize) -> Array2<Complex64> {
    Array2::from_shape_fn((2 * m, 2 * m), |(i, j)| {
        if (i + m) % (2 * m) == j {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

fn max_abs(a: &Array2<Complex64>) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn matnorm(a: &ArrayView2<Complex64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Greedy nearest matching of two equal-length multisets of complex
/// numbers; panics if any element has no partner within `tol`.
fn assert_multisets_match(expected: &[Complex64], actual: &[Complex64], tol: f64) {
    assert_eq!(expected.len(), actual.len());
    let mut used = vec![false; actual.len()];
    for e in expected {
        let mut best: Option<(usize, f64)> = None;
        for (i, a) in actual.iter().enumerate() {
            if used[i] {
                continue;
            }
            let d = (e - a).norm();
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        let (idx, dist) = best.expect("length mismatch");
        assert!(
            dist <= tol,
            "no partner for {e} within {tol}; nearest at distance {dist}"
        );
        used[idx] = true;
    }
}

/// Real roots (and for one-real-root cases the complex pair) of the monic
/// cubic μ³ + c2μ² + c1μ + c0, by the trigonometric/Cardano formulas.
fn cubic_roots(c2: f64, c1: f64, c0: f64) -> [Complex64; 3] {
    let p = c1 - c2 * c2 / 3.0;
    let q = 2.0 * c2.powi(3) / 27.0 - c2 * c1 / 3.0 + c0;
    let shift = -c2 / 3.0;
    let disc = -4.0 * p.powi(3) - 27.0 * q * q;
    if disc >= 0.0 {
        // Three real roots.
        let r = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (2.0 * p)) * (-3.0 / p).sqrt();
        let phi = arg.clamp(-1.0, 1.0).acos();
        [0, 1, 2].map(|k| {
            c(
                r * ((phi - 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos() + shift,
                0.0,
            )
        })
    } else {
        let s = (q * q / 4.0 + p.powi(3) / 27.0).sqrt();
        let u = (-q / 2.0 + s).cbrt();
        let v = (-q / 2.0 - s).cbrt();
        let re = -(u + v) / 2.0 + shift;
        let im = (3.0f64.sqrt() / 2.0) * (u - v);
        [c(u + v + shift, 0.0), c(re, im), c(re, -im)]
    }
}

/// All six ηM eigenvalues of the normal-phase form: the determinant
/// factors into the cubic p(μ) = (μ−ω)(μ²−ω₀²) − 2λ²ω₀ and its mirror
/// −p(−μ), so the multiset is {roots of p} ∪ {−roots of p}.
fn normal_phase_eigenvalues(omega: f64, omega0: f64, lambda: f64) -> Vec<Complex64> {
    let roots = cubic_roots(
        -omega,
        -omega0 * omega0,
        omega * omega0 * omega0 - 2.0 * lambda * lambda * omega0,
    );
    let mut all: Vec<Complex64> = roots.to_vec();
    all.extend(roots.iter().map(|r| -r));
    all
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stable_forms_are_positive_and_canonically_transformable(
        raw in prop::collection::vec(-1.0f64..1.0, 72)
    ) {
        let form = stable_form(&raw);
        let spectrum = bogoliubov_spectrum(&form, 1e-10, 1e-10).unwrap();
        prop_assert_eq!(spectrum.classification, Classification::AllPositive);
        for (w, k) in spectrum.frequencies.iter().zip(&spectrum.krein_signs) {
            prop_assert!(w.re > 0.0);
            prop_assert_eq!(*k, 1);
        }

        let t = bogoliubov_transform(&form, &spectrum).unwrap();
        let eta6 = eta(3);
        let gam = gamma_swap(3);
        let scale = max_abs(&build_m_matrix(&form)).max(1.0);

        // Symplectic identity TηT†η = 1, recomputed with plain products.
        let tdag = Array2::from_shape_fn((6, 6), |(i, j)| t[[j, i]].conj());
        let id_check = t.dot(&eta6).dot(&tdag).dot(&eta6);
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
                prop_assert!((id_check[[i, j]] - want).norm() < 1e-10 * scale);
            }
        }

        // Conjugation structure T* = γ̂Tγ̂.
        let conj_t = t.mapv(|z| z.conj());
        let gtg = gam.dot(&t).dot(&gam);
        prop_assert!(max_abs(&(&conj_t - &gtg)) < 1e-10 * scale);

        // T diagonalizes ηM with the reported frequencies: T(ηM)T⁻¹ =
        // diag(ω, −ω), using the symplectic inverse T⁻¹ = ηT†η.
        let eta_m = eta6.dot(&build_m_matrix(&form));
        let tinv = eta6.dot(&tdag).dot(&eta6);
        let diag = t.dot(&eta_m).dot(&tinv);
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j {
                    let w = spectrum.frequencies[i % 3];
                    if i < 3 { w } else { -w }
                } else {
                    c(0.0, 0.0)
                };
                prop_assert!(
                    (diag[[i, j]] - want).norm() < 1e-8 * scale,
                    "diag[{},{}] = {}, want {}", i, j, diag[[i, j]], want
                );
            }
        }
    }

    #[test]
    fn single_mode_matches_closed_form(
        w in 0.1f64..3.0,
        g in 0.0f64..3.0,
    ) {
        let form = QuadraticBosonForm::new(
            Array2::from_elem((1, 1), c(w, 0.0)),
            Array2::from_elem((1, 1), c(g, 0.0)),
            0.0,
        ).unwrap();
        let spectrum = bogoliubov_spectrum(&form, 1e-10, 1e-10).unwrap();
        if w > g + 1e-3 {
            let expect = (w * w - g * g).sqrt();
            prop_assert_eq!(spectrum.classification, Classification::AllPositive);
            prop_assert!((spectrum.frequencies[0] - expect).norm() < 1e-10 * w.max(1.0));
        } else if g > w + 1e-3 {
            prop_assert_eq!(spectrum.classification, Classification::HasComplex);
            prop_assert_eq!(spectrum.krein_signs[0], 0);
        }
        // Within 1e-3 of the exceptional point either outcome is
        // legitimate; only finiteness is required.
        prop_assert!(spectrum.frequencies[0].re.is_finite());
        prop_assert!(spectrum.frequencies[0].im.is_finite());
    }

    #[test]
    fn spectra_are_deterministic(raw in prop::collection::vec(-1.0f64..1.0, 72)) {
        let form = stable_form(&raw);
        let s1 = bogoliubov_spectrum(&form, 1e-10, 1e-10).unwrap();
        let s2 = bogoliubov_spectrum(&form, 1e-10, 1e-10).unwrap();
        for (a, b) in s1.frequencies.iter().zip(&s2.frequencies) {
            prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
            prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }
}

#[test]
fn normal_phase_spectrum_matches_cubic_roots() {
    // Sweep couplings through all three regimes (stable, soft-negative,
    // complex) and several frequency ratios; the engine's six ηM
    // eigenvalues must reproduce the analytic cubic root multiset, and
    // each reported frequency must be one of them.
    for &(omega, omega0) in &[(1.0, 1.0), (2.0, 1.0), (0.5, 1.5)] {
        for &lambda in &[0.0f64, 0.2, 0.45, 0.6, 0.72, 0.78, 0.9, 1.2] {
            let params = ModelParams::new(omega, omega0, lambda, 1e6).unwrap();
            let form = normal_form(&params).unwrap();
            let analytic = normal_phase_eigenvalues(omega, omega0, lambda);

            let eta_m = eta(3).dot(&build_m_matrix(&form));
            let eig = dicke_core::eig::eig_general(&eta_m).unwrap();
            let scale = matnorm(&eta_m.view()).max(1.0);
            assert_multisets_match(&analytic, &eig.values, 1e-8 * scale);

            let spectrum = bogoliubov_spectrum(&form, 1e-9, 1e-9).unwrap();
            for w in &spectrum.frequencies {
                let near = analytic.iter().any(|r| (r - w).norm() < 1e-8 * scale);
                assert!(near, "reported {w} is not an analytic eigenvalue");
            }
        }
    }
}

#[test]
fn krein_selection_reproduces_negative_branch() {
    // Between the critical coupling and the complex onset the normal
    // phase has one Krein-positive frequency on the negative real axis;
    // the reported triple at λ = 0.75 (resonance) is (+, +, −).
    let params = ModelParams::new(1.0, 1.0, 0.75, 1e6).unwrap();
    let form = normal_form(&params).unwrap();
    let s = bogoliubov_spectrum(&form, 1e-9, 1e-9).unwrap();
    assert_eq!(s.classification, Classification::HasNegative);
    assert!(s.frequencies[0].re > 0.0);
    assert!(s.frequencies[1].re > 0.0);
    assert!(s.frequencies[2].re < -1e-3);
    assert_eq!(s.krein_signs, vec![1, 1, 1]);

    // The negative member is an analytic root of the determinant cubic.
    let analytic = normal_phase_eigenvalues(1.0, 1.0, 0.75);
    let w2 = s.frequencies[2];
    assert!(analytic.iter().any(|r| (r - w2).norm() < 1e-8));
}

#[test]
fn squared_frequencies_match_reduced_eigenproblem() {
    // For real A and B the squared frequencies are the eigenvalues of
    // (A − B)(A + B), an independent reduction that never builds ηM.
    for &lambda in &[0.2, 0.5, 0.65] {
        let params = ModelParams::new(1.0, 1.0, lambda, 1e6).unwrap();
        let form = normal_form(&params).unwrap();
        let prod = (form.a_matrix() - form.b_matrix()).dot(&(form.a_matrix() + form.b_matrix()));
        let eig = dicke_core::eig::eig_general(&prod).unwrap();
        let spectrum = bogoliubov_spectrum(&form, 1e-9, 1e-9).unwrap();
        let squared: Vec<Complex64> = spectrum.frequencies.iter().map(|w| w * w).collect();
        assert_multisets_match(&squared, &eig.values, 1e-7);
    }

    // The super-radiant phase keeps an exact zero frequency (continuous
    // displacement-phase symmetry); the reduced problem must show it.
    let params = ModelParams::new(1.0, 1.0, 1.1, 1e6).unwrap();
    let form = branch_form(&params, Branch::Sr1).unwrap();
    let prod = (form.a_matrix() - form.b_matrix()).dot(&(form.a_matrix() + form.b_matrix()));
    let eig = dicke_core::eig::eig_general(&prod).unwrap();
    let min = eig.values.iter().map(|z| z.norm()).fold(f64::MAX, f64::min);
    assert!(min < 1e-10 * matnorm(&prod.view()), "smallest |ω²| = {min}");
}
