//! Implementations of the five subcommands. Each returns the rendered
//! output text; the binary decides whether it goes to a file or stdout.

use clap::ValueEnum;
use dicke_core::{
    bogoliubov_spectrum, branch_form, energy_density_curve, find_complex_onset, find_critical,
    fit_points, fit_power_law, ground_energy, lambda_grid, log_spaced_offsets, sweep, Branch,
    FitTarget, ModelParams,
};
use dicke_oracle::{fock_ed, FockSpec};

use crate::config::Resolved;
use crate::error::CliError;
use crate::output::{render_energy, render_oracle, render_sweep, sci9, OracleRow};

/// Default number of offsets in a power-law fit window.
pub const DEFAULT_FIT_POINTS: usize = 25;
/// Default coupling for the oracle comparison (normal phase, converged
/// quickly by a modest photon cutoff).
pub const DEFAULT_ORACLE_LAMBDA: f64 = 0.3;
/// Default per-mode Fock cutoff for the oracle comparison.
pub const DEFAULT_ORACLE_CUTOFF: usize = 8;
/// Default number of levels compared against the harmonic ladder.
pub const DEFAULT_ORACLE_LEVELS: usize = 8;

/// Fit targets exposed on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitKind {
    /// Excitation gap below the boundary: Δ ∝ (λc − λ)^(1/2).
    Gap,
    /// Oscillator length of the softening mode: l ∝ (λc − λ)^(-1/4).
    Length,
    /// Field occupation density above the boundary: ⟨a†a⟩/N ∝ (λ − λc).
    OrderParameter,
}

impl FitKind {
    pub fn target(self) -> FitTarget {
        match self {
            FitKind::Gap => FitTarget::Gap,
            FitKind::Length => FitTarget::Length,
            FitKind::OrderParameter => FitTarget::OrderParameter,
        }
    }

    /// Offset window δ = |λ − λc| used when no window flags are given.
    /// The gap and length windows sit closer to the boundary because their
    /// asymptotic power law picks up corrections sooner; the order
    /// parameter is linear over a wider range.
    pub fn default_window(self) -> (f64, f64) {
        match self {
            FitKind::Gap | FitKind::Length => (1.0e-4, 3.0e-3),
            FitKind::OrderParameter => (1.0e-4, 1.0e-2),
        }
    }
}

fn base_params(resolved: &Resolved) -> Result<ModelParams, CliError> {
    // The base coupling is a placeholder; sweep and curve functions
    // substitute grid values through with_lambda.
    Ok(ModelParams::new(
        resolved.omega,
        resolved.omega0,
        0.0,
        resolved.n_atoms,
    )?)
}

pub fn sweep_table(resolved: &Resolved) -> Result<String, CliError> {
    let branch = resolved.require_branch()?;
    let grid = lambda_grid(resolved.lambda_min, resolved.lambda_max, resolved.steps)?;
    let params = base_params(resolved)?;
    let records = sweep(&params, branch, &grid, resolved.scan_tolerances())?;
    Ok(render_sweep(&records, resolved.format))
}

pub fn energy_table(resolved: &Resolved) -> Result<String, CliError> {
    let branch = resolved.require_branch()?;
    let grid = lambda_grid(resolved.lambda_min, resolved.lambda_max, resolved.steps)?;
    let params = base_params(resolved)?;
    let curve = energy_density_curve(&params, branch, &grid, resolved.scan_tolerances())?;
    Ok(render_energy(branch.label(), &curve, resolved.format))
}

/// Locates either a branch's stability boundary or, with `onset`, the
/// coupling where the normal spectrum turns complex. Prints the coupling
/// alone with seven decimals so scripts can consume it directly.
pub fn critical_line(
    resolved: &Resolved,
    onset: bool,
    bracket: (f64, f64),
) -> Result<String, CliError> {
    let lambda = if onset {
        find_complex_onset(
            resolved.omega,
            resolved.omega0,
            bracket,
            resolved.bisect_tol,
            resolved.strict_tolerances(),
        )?
    } else {
        let branch = resolved.require_branch()?;
        find_critical(
            branch,
            resolved.omega,
            resolved.omega0,
            bracket,
            resolved.bisect_tol,
            resolved.critical_tolerances(branch),
        )?
        .lambda_c
    };
    Ok(format!("{lambda:.7}\n"))
}

pub fn fit_report(
    resolved: &Resolved,
    kind: FitKind,
    window: (f64, f64),
    points: usize,
) -> Result<String, CliError> {
    let params = base_params(resolved)?;
    let offsets = log_spaced_offsets(window.0, window.1, points)?;
    let pts = fit_points(
        &params,
        kind.target(),
        &offsets,
        resolved.strict_tolerances(),
    )?;
    let fit = fit_power_law(&pts)?;
    Ok(format!(
        "exponent {}\nlog_prefactor {}\nmax_abs_residual {}\nn_points {}\n",
        sci9(fit.exponent),
        sci9(fit.log_prefactor),
        sci9(fit.max_abs_residual),
        fit.n_points
    ))
}

/// Lowest `count` members of the harmonic ladder `e0 + Σ nᵢ ωᵢ`.
/// Including combination levels matters: with incommensurate frequencies
/// a multi-quantum level of a soft mode can undercut a single quantum of
/// a stiff one.
pub fn combination_levels(e0: f64, freqs: &[f64], count: usize) -> Vec<f64> {
    let max_quanta = 6usize;
    let mut levels = Vec::new();
    let mut stack = vec![(0usize, 0.0f64)];
    while let Some((mode, acc)) = stack.pop() {
        if mode == freqs.len() {
            levels.push(e0 + acc);
            continue;
        }
        for n in 0..=max_quanta {
            stack.push((mode + 1, acc + n as f64 * freqs[mode]));
        }
    }
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    levels.truncate(count);
    levels
}

/// Compares engine predictions (ground energy plus harmonic ladder)
/// against a truncated Fock diagonalization of the same quadratic form.
/// The two routes share only the coefficient matrices, so agreement is
/// evidence that both the symplectic engine and the assembled operator
/// are right.
pub fn oracle_table(
    resolved: &Resolved,
    lambda: f64,
    cutoff: usize,
    levels: usize,
) -> Result<String, CliError> {
    let branch = resolved.branch.unwrap_or(Branch::Normal);
    let params = ModelParams::new(resolved.omega, resolved.omega0, lambda, resolved.n_atoms)?;
    let form = branch_form(&params, branch)?;
    let tols = resolved.scan_tolerances();
    let spectrum = bogoliubov_spectrum(&form, tols.tol_zero, tols.tol_im)?;
    let e0 = ground_energy(&form, &spectrum)?;
    let freqs: Vec<f64> = spectrum.frequencies.iter().map(|w| w.re).collect();
    let engine = combination_levels(e0, &freqs, levels);

    let spec = FockSpec::uniform(form.n_modes(), cutoff)?;
    let oracle = fock_ed(&form, &spec, levels)?;

    let rows: Vec<OracleRow> = engine
        .iter()
        .zip(oracle.iter())
        .enumerate()
        .map(|(i, (&p, &o))| OracleRow {
            quantity: if i == 0 {
                "ground".to_string()
            } else {
                format!("level_{i}")
            },
            engine: p,
            oracle: o,
        })
        .collect();
    Ok(render_oracle(&rows, resolved.format))
}
