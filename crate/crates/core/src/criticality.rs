//! Phase-boundary location and critical-scaling analysis.
//!
//! Everything here drives the [`crate::dicke`] forms through the
//! [`crate::bogoliubov`] engine: coupling sweeps with stability flags,
//! bisection on the physical/unphysical boundary of a branch, bisection on
//! the real-to-complex onset of the normal-phase spectrum, log-log
//! power-law fits of gap/length/order-parameter scaling, and ground-energy
//! density curves with one-sided derivative stencils at the transition.

use num_complex::Complex64;

use crate::bogoliubov::{bogoliubov_spectrum, ground_energy, Classification};
use crate::dicke::{branch_form, order_parameter, Branch, ModelParams};
use crate::error::CoreError;

/// Number of atoms used for boundary searches. Stability of a branch is
/// intensive (the matrices depend on N only through X±/N), so any
/// macroscopic value gives the same answer; this one keeps finite-size
/// leakage in the offset terms at the 1e-6 level.
const SEARCH_N_ATOMS: f64 = 1e6;

const BISECTION_MAX_ITERATIONS: usize = 50;

/// Zero-detection and reality thresholds handed to the spectrum engine,
/// scaled to the largest bare frequency of the model.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Modulus below which a paired eigenvalue counts as a zero mode.
    pub tol_zero: f64,
    /// Imaginary part above which a frequency counts as complex.
    pub tol_im: f64,
}

impl Tolerances {
    /// Strict thresholds for interior points, where eigenvalues are far
    /// from the real axis crossings: 1e-9 × max(ω, ω₀).
    pub fn engine(omega: f64, omega0: f64) -> Self {
        let scale = omega.max(omega0);
        Self {
            tol_zero: 1e-9 * scale,
            tol_im: 1e-9 * scale,
        }
    }

    /// Thresholds for scans that straddle a transition: 1e-6 × max(ω, ω₀).
    /// A vanishing frequency sits in a defective (Jordan) block whose
    /// numerical splitting scales like √ε, about 1e-8; this margin absorbs
    /// it so the boundary point itself classifies as a zero mode rather
    /// than as a spurious complex pair.
    pub fn classify(omega: f64, omega0: f64) -> Self {
        let scale = omega.max(omega0);
        Self {
            tol_zero: 1e-6 * scale,
            tol_im: 1e-6 * scale,
        }
    }
}

/// One sweep point. `frequencies` is `None` when the branch has no
/// displacement solution at this coupling (construction fails), in which
/// case `physical` is false. `energy_density` is present only for
/// physical points.
#[derive(Debug, Clone, Copy)]
pub struct SweepRecord {
    pub lambda: f64,
    pub branch: Branch,
    pub frequencies: Option<[Complex64; 3]>,
    pub physical: bool,
    pub energy_density: Option<f64>,
}

/// Uniform grid of `steps ≥ 2` couplings with exact endpoints.
pub fn lambda_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>, CoreError> {
    if !min.is_finite() || !max.is_finite() {
        return Err(CoreError::NonFinite("lambda grid endpoints"));
    }
    if min < 0.0 || min >= max {
        return Err(CoreError::InvalidInput(format!(
            "need 0 <= lambda_min < lambda_max, got [{min}, {max}]"
        )));
    }
    if steps < 2 {
        return Err(CoreError::InvalidInput(
            "a lambda grid needs at least 2 points".into(),
        ));
    }
    let h = (max - min) / (steps - 1) as f64;
    let mut grid: Vec<f64> = (0..steps).map(|i| min + h * i as f64).collect();
    // Pin the endpoints exactly so downstream curves abut shared couplings.
    grid[0] = min;
    grid[steps - 1] = max;
    Ok(grid)
}

/// Evaluates one branch over an ascending coupling grid. Couplings where
/// the branch has no displacement solution (below threshold, or a depleted
/// atomic mode) become unphysical records with no frequencies; genuine
/// numerical failures of the eigensolver propagate as errors.
pub fn sweep(
    params_base: &ModelParams,
    branch: Branch,
    grid: &[f64],
    tols: Tolerances,
) -> Result<Vec<SweepRecord>, CoreError> {
    if grid.is_empty() {
        return Err(CoreError::InvalidInput("empty lambda grid".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(CoreError::InvalidInput(
            "lambda grid must be strictly ascending".into(),
        ));
    }
    let mut records = Vec::with_capacity(grid.len());
    for &lambda in grid {
        let params = params_base.with_lambda(lambda)?;
        let form = match branch_form(&params, branch) {
            Ok(form) => form,
            Err(CoreError::DisplacementUndefined { .. }) | Err(CoreError::Depletion { .. }) => {
                records.push(SweepRecord {
                    lambda,
                    branch,
                    frequencies: None,
                    physical: false,
                    energy_density: None,
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        let spectrum = bogoliubov_spectrum(&form, tols.tol_zero, tols.tol_im)?;
        let physical = spectrum.classification.is_physical();
        let energy_density = if physical {
            Some(ground_energy(&form, &spectrum)? / params.n_atoms())
        } else {
            None
        };
        let mut freqs = [Complex64::new(0.0, 0.0); 3];
        freqs.copy_from_slice(&spectrum.frequencies);
        records.push(SweepRecord {
            lambda,
            branch,
            frequencies: Some(freqs),
            physical,
            energy_density,
        });
    }
    Ok(records)
}

/// Result of a phase-boundary bisection.
#[derive(Debug, Clone, Copy)]
pub struct CriticalPoint {
    pub branch: Branch,
    pub lambda_c: f64,
    pub bracket: (f64, f64),
    pub tol: f64,
    pub iterations: usize,
}

fn validate_bracket(bracket: (f64, f64), tol: f64) -> Result<(), CoreError> {
    let (lo, hi) = bracket;
    if !lo.is_finite() || !hi.is_finite() || !tol.is_finite() {
        return Err(CoreError::NonFinite("bisection bracket"));
    }
    if lo < 0.0 || lo >= hi {
        return Err(CoreError::InvalidInput(format!(
            "need 0 <= lo < hi, got bracket ({lo}, {hi})"
        )));
    }
    if tol <= 0.0 {
        return Err(CoreError::InvalidInput(
            "bisection tolerance must be positive".into(),
        ));
    }
    Ok(())
}

/// Bisects `predicate` over `bracket`, requiring it to differ at the two
/// ends. Returns the midpoint of the final interval and the iteration
/// count.
fn bisect<F>(bracket: (f64, f64), tol: f64, mut predicate: F) -> Result<(f64, usize), CoreError>
where
    F: FnMut(f64) -> Result<bool, CoreError>,
{
    validate_bracket(bracket, tol)?;
    let (mut lo, mut hi) = bracket;
    let at_lo = predicate(lo)?;
    let at_hi = predicate(hi)?;
    if at_lo == at_hi {
        return Err(CoreError::Bracket { lo, hi });
    }
    let mut iterations = 0;
    while hi - lo > tol && iterations < BISECTION_MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if predicate(mid)? == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok((0.5 * (lo + hi), iterations))
}

fn stability_at(
    branch: Branch,
    omega: f64,
    omega0: f64,
    lambda: f64,
    tols: Tolerances,
) -> Result<bool, CoreError> {
    let params = ModelParams::new(omega, omega0, lambda, SEARCH_N_ATOMS)?;
    match branch_form(&params, branch) {
        Ok(form) => {
            let spectrum = bogoliubov_spectrum(&form, tols.tol_zero, tols.tol_im)?;
            Ok(spectrum.classification.is_physical())
        }
        // No displacement solution means the branch does not exist here,
        // which for boundary purposes is the unphysical side.
        Err(CoreError::DisplacementUndefined { .. }) | Err(CoreError::Depletion { .. }) => {
            Ok(false)
        }
        Err(e) => Err(e),
    }
}

/// Locates the coupling where `branch` switches between physical and
/// unphysical, by bisection on the stability classification. The bracket
/// must straddle the boundary. For the normal branch this is the critical
/// coupling √(ωω₀/2); for the super-radiant branches it is the lower edge
/// of their stability window.
pub fn find_critical(
    branch: Branch,
    omega: f64,
    omega0: f64,
    bracket: (f64, f64),
    tol: f64,
    tols: Tolerances,
) -> Result<CriticalPoint, CoreError> {
    let (lambda_c, iterations) = bisect(bracket, tol, |lambda| {
        stability_at(branch, omega, omega0, lambda, tols)
    })?;
    Ok(CriticalPoint {
        branch,
        lambda_c,
        bracket,
        tol,
        iterations,
    })
}

/// Locates the coupling where the normal-phase spectrum first acquires a
/// complex frequency pair (distinct from, and above, the critical
/// coupling, where one frequency merely changes sign).
pub fn find_complex_onset(
    omega: f64,
    omega0: f64,
    bracket: (f64, f64),
    tol: f64,
    tols: Tolerances,
) -> Result<f64, CoreError> {
    let (onset, _) = bisect(bracket, tol, |lambda| {
        let params = ModelParams::new(omega, omega0, lambda, SEARCH_N_ATOMS)?;
        let form = branch_form(&params, Branch::Normal)?;
        let spectrum = bogoliubov_spectrum(&form, tols.tol_zero, tols.tol_im)?;
        Ok(spectrum.classification == Classification::HasComplex)
    })?;
    Ok(onset)
}

/// Least-squares fit of `y = C x^s` on log-log axes.
#[derive(Debug, Clone, Copy)]
pub struct FitResult {
    /// The exponent `s`.
    pub exponent: f64,
    /// `ln C`.
    pub log_prefactor: f64,
    /// Largest |residual| in ln y.
    pub max_abs_residual: f64,
    pub n_points: usize,
}

/// Fits a power law through `(x, y)` points, all strictly positive,
/// by linear least squares on `(ln x, ln y)`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<FitResult, CoreError> {
    if points.len() < 3 {
        return Err(CoreError::InvalidInput(format!(
            "power-law fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    for &(x, y) in points {
        if !x.is_finite() || !y.is_finite() {
            return Err(CoreError::NonFinite("power-law fit points"));
        }
        if x <= 0.0 || y <= 0.0 {
            return Err(CoreError::Domain(format!(
                "power-law fit needs positive coordinates, got ({x}, {y})"
            )));
        }
    }
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum::<f64>();
    let sxy = logs
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum::<f64>();
    if sxx < 1e-24 {
        return Err(CoreError::Domain(
            "power-law fit abscissas are degenerate".into(),
        ));
    }
    let exponent = sxy / sxx;
    let log_prefactor = mean_y - exponent * mean_x;
    let max_abs_residual = logs
        .iter()
        .map(|&(lx, ly)| (ly - (exponent * lx + log_prefactor)).abs())
        .fold(0.0_f64, f64::max);
    Ok(FitResult {
        exponent,
        log_prefactor,
        max_abs_residual,
        n_points: points.len(),
    })
}

/// Scaling observable measured against the distance to the critical
/// coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitTarget {
    /// Lowest excitation frequency of the normal phase at λc − δ.
    Gap,
    /// Oscillator length 1/√gap of the softening mode at λc − δ.
    Length,
    /// Field occupation density ⟨a†a⟩/N at λc + δ.
    OrderParameter,
}

/// Geometrically spaced offsets in `[min, max]`, ascending, exact ends.
pub fn log_spaced_offsets(min: f64, max: f64, count: usize) -> Result<Vec<f64>, CoreError> {
    if !(min > 0.0) || !(max > min) || !max.is_finite() {
        return Err(CoreError::InvalidInput(format!(
            "need 0 < min < max, got [{min}, {max}]"
        )));
    }
    if count < 2 {
        return Err(CoreError::InvalidInput(
            "offset grid needs at least 2 points".into(),
        ));
    }
    let ratio = (max / min).ln() / (count - 1) as f64;
    let mut out: Vec<f64> = (0..count)
        .map(|i| min * (ratio * i as f64).exp())
        .collect();
    out[0] = min;
    out[count - 1] = max;
    Ok(out)
}

/// Samples a scaling observable at the given offsets δ from the critical
/// coupling of `params` (which fixes ω, ω₀, N; its λ is ignored). Returns
/// (δ, value) pairs ready for [`fit_power_law`].
pub fn fit_points(
    params: &ModelParams,
    target: FitTarget,
    offsets: &[f64],
    tols: Tolerances,
) -> Result<Vec<(f64, f64)>, CoreError> {
    let lambda_c = params.lambda_critical();
    let mut out = Vec::with_capacity(offsets.len());
    for &delta in offsets {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(CoreError::InvalidInput(format!(
                "offsets must be positive, got {delta}"
            )));
        }
        let value = match target {
            FitTarget::Gap | FitTarget::Length => {
                let lambda = lambda_c - delta;
                if lambda <= 0.0 {
                    return Err(CoreError::InvalidInput(format!(
                        "offset {delta} reaches below zero coupling"
                    )));
                }
                let p = params.with_lambda(lambda)?;
                let form = branch_form(&p, Branch::Normal)?;
                let spectrum = bogoliubov_spectrum(&form, tols.tol_zero, tols.tol_im)?;
                if !spectrum.classification.is_physical() {
                    return Err(CoreError::UnphysicalPhase(
                        "normal phase unstable inside the fit window",
                    ));
                }
                // Frequencies are sorted descending; the softening mode is
                // the last one.
                let gap = spectrum.frequencies[2].re;
                if gap <= 0.0 {
                    return Err(CoreError::Domain(format!(
                        "non-positive gap {gap} at offset {delta}"
                    )));
                }
                match target {
                    FitTarget::Gap => gap,
                    FitTarget::Length => 1.0 / gap.sqrt(),
                    FitTarget::OrderParameter => unreachable!(),
                }
            }
            FitTarget::OrderParameter => {
                let p = params.with_lambda(lambda_c + delta)?;
                order_parameter(&p)
            }
        };
        out.push((delta, value));
    }
    Ok(out)
}

/// Ground-state energy per atom along a coupling grid, keeping only the
/// couplings where the branch exists and is physical. Unphysical points
/// are skipped (not errors): callers probing across a boundary want the
/// physical segment, and the record-level view is [`sweep`].
pub fn energy_density_curve(
    params_base: &ModelParams,
    branch: Branch,
    grid: &[f64],
    tols: Tolerances,
) -> Result<Vec<(f64, f64)>, CoreError> {
    let records = sweep(params_base, branch, grid, tols)?;
    Ok(records
        .into_iter()
        .filter_map(|r| r.energy_density.map(|e| (r.lambda, e)))
        .collect())
}

/// One-sided first and second derivative mismatches at a shared endpoint.
#[derive(Debug, Clone, Copy)]
pub struct DerivativeJump {
    pub d1_jump: f64,
    pub d2_jump: f64,
}

fn check_uniform_tail(
    curve: &[(f64, f64)],
    h: f64,
    name: &'static str,
) -> Result<(), CoreError> {
    if curve.len() < 3 {
        return Err(CoreError::InvalidInput(format!(
            "{name} curve needs at least 3 points"
        )));
    }
    for w in curve.windows(2) {
        let step = w[1].0 - w[0].0;
        if (step - h).abs() > 1e-9 * h.abs().max(1.0) {
            return Err(CoreError::InvalidInput(format!(
                "{name} curve spacing {step} differs from stencil step {h}"
            )));
        }
    }
    Ok(())
}

/// One-sided derivative stencils at a transition coupling. `left` must end
/// at `lambda_c` and `right` must start there, both uniformly spaced with
/// step `h`. First derivatives use the secant across ±2h; second
/// derivatives use the three-point stencil centered at λc ∓ h. Returns
/// right minus left for both orders. The secants measure the slope at
/// λc ∓ h, so even a smooth curve reports d1_jump ≈ 2h f''; only the
/// curvature jump is h-independent at leading order.
pub fn second_derivative_jump(
    left: &[(f64, f64)],
    right: &[(f64, f64)],
    lambda_c: f64,
    h: f64,
) -> Result<DerivativeJump, CoreError> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(CoreError::InvalidInput(format!(
            "stencil step must be positive, got {h}"
        )));
    }
    check_uniform_tail(left, h, "left")?;
    check_uniform_tail(right, h, "right")?;
    let end = left[left.len() - 1];
    let start = right[0];
    let align = 1e-9 * lambda_c.abs().max(1.0);
    if (end.0 - lambda_c).abs() > align || (start.0 - lambda_c).abs() > align {
        return Err(CoreError::InvalidInput(format!(
            "curves must abut lambda_c = {lambda_c}: left ends at {}, right starts at {}",
            end.0, start.0
        )));
    }
    let lm1 = left[left.len() - 2].1;
    let lm2 = left[left.len() - 3].1;
    let l0 = end.1;
    let r0 = start.1;
    let rp1 = right[1].1;
    let rp2 = right[2].1;

    let d1_left = (l0 - lm2) / (2.0 * h);
    let d1_right = (rp2 - r0) / (2.0 * h);
    let d2_left = (l0 - 2.0 * lm1 + lm2) / (h * h);
    let d2_right = (rp2 - 2.0 * rp1 + r0) / (h * h);
    Ok(DerivativeJump {
        d1_jump: d1_right - d1_left,
        d2_jump: d2_right - d2_left,
    })
}
