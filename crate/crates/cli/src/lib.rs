//! Command-line front end.
//!
//! Five subcommands cover the workflows the library supports: `sweep`
//! (spectra over a coupling grid), `energy` (ground-state energy density),
//! `critical` (bisection for a stability boundary or the complex onset),
//! `fit` (critical power laws), and `oracle` (engine vs truncated-Fock
//! diagonalization). Tabular commands write CSV or JSON with a fixed
//! column contract; scalar commands print to stdout. Outputs are
//! byte-deterministic for a given configuration.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use dicke_core::Branch;

use commands::FitKind;
use config::{
    pick, FileConfig, OutputFormat, Resolved, DEFAULT_BISECT_TOL, DEFAULT_BRACKET,
    DEFAULT_LAMBDA_MAX, DEFAULT_LAMBDA_MIN, DEFAULT_N_ATOMS, DEFAULT_OMEGA, DEFAULT_OMEGA0,
    DEFAULT_STEPS,
};
use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "dicke",
    version,
    about = "Spectra, phase boundaries, critical fits, and diagonalization cross-checks \
             for a cavity coupled to two counter-rotating atomic ensembles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenfrequencies, stability flag, and energy density on a coupling grid.
    Sweep(GridArgs),
    /// Ground-state energy density on a coupling grid (physical points only).
    Energy(GridArgs),
    /// Bisect for a branch's stability boundary, or the complex onset with --onset.
    Critical(CriticalArgs),
    /// Fit a power law to a critical observable near the boundary.
    Fit(FitArgs),
    /// Compare engine levels against an independent Fock-space diagonalization.
    Oracle(OracleArgs),
}

/// Parameters understood by every subcommand.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Cavity mode frequency.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Atomic level splitting.
    #[arg(long)]
    pub omega0: Option<f64>,
    /// Atom number per ensemble (sets displacement and energy scales).
    #[arg(long)]
    pub n_atoms: Option<f64>,
    /// Frequency-modulus threshold for calling a mode zero.
    #[arg(long)]
    pub tol_zero: Option<f64>,
    /// Imaginary-part threshold for calling a frequency complex.
    #[arg(long)]
    pub tol_im: Option<f64>,
    /// JSON config file; explicit flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Branch to evaluate: normal, sr1, sr2, sr3, or sr4.
    #[arg(long)]
    pub branch: Option<Branch>,
    /// Lower end of the coupling grid.
    #[arg(long)]
    pub lambda_min: Option<f64>,
    /// Upper end of the coupling grid.
    #[arg(long)]
    pub lambda_max: Option<f64>,
    /// Number of grid points (endpoints included).
    #[arg(long)]
    pub steps: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Table format.
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Branch whose stability boundary to locate.
    #[arg(long)]
    pub branch: Option<Branch>,
    /// Locate the coupling where normal-branch frequencies turn complex
    /// instead of a stability boundary.
    #[arg(long)]
    pub onset: bool,
    /// Lower bracket endpoint for the bisection.
    #[arg(long)]
    pub bracket_lo: Option<f64>,
    /// Upper bracket endpoint for the bisection.
    #[arg(long)]
    pub bracket_hi: Option<f64>,
    /// Bisection convergence tolerance on the coupling.
    #[arg(long)]
    pub bisect_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Observable to fit.
    #[arg(long, value_enum)]
    pub target: FitKind,
    /// Smallest offset |λ − λc| in the fit window.
    #[arg(long)]
    pub window_min: Option<f64>,
    /// Largest offset |λ − λc| in the fit window.
    #[arg(long)]
    pub window_max: Option<f64>,
    /// Number of log-spaced offsets in the window.
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Branch whose quadratic form to diagonalize (default normal).
    #[arg(long)]
    pub branch: Option<Branch>,
    /// Coupling at which to compare.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Per-mode Fock cutoff for the truncated diagonalization.
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Number of low-lying levels to compare.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Table format.
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

impl CommonArgs {
    /// Resolves shared parameters against the config file and defaults.
    /// Grid, output, and bisection settings are passed by the subcommand
    /// that owns the corresponding flags.
    #[allow(clippy::too_many_arguments)]
    fn resolve(
        &self,
        branch: Option<Branch>,
        lambda_min: Option<f64>,
        lambda_max: Option<f64>,
        steps: Option<usize>,
        output: Option<PathBuf>,
        format: Option<OutputFormat>,
        bisect_tol: Option<f64>,
    ) -> Result<Resolved, CliError> {
        let file = FileConfig::load(self.config.as_deref())?;
        let file_branch = file.branch()?;
        Ok(Resolved {
            omega: pick(self.omega, file.omega, DEFAULT_OMEGA),
            omega0: pick(self.omega0, file.omega0, DEFAULT_OMEGA0),
            n_atoms: pick(self.n_atoms, file.n_atoms, DEFAULT_N_ATOMS),
            branch: branch.or(file_branch),
            lambda_min: pick(lambda_min, file.lambda_min, DEFAULT_LAMBDA_MIN),
            lambda_max: pick(lambda_max, file.lambda_max, DEFAULT_LAMBDA_MAX),
            steps: pick(steps, file.steps, DEFAULT_STEPS),
            output_path: output.or(file.output_path),
            format: pick(format, file.format, OutputFormat::Csv),
            tol_zero: self.tol_zero.or(file.tol_zero),
            tol_im: self.tol_im.or(file.tol_im),
            bisect_tol: pick(bisect_tol, file.bisect_tol, DEFAULT_BISECT_TOL),
        })
    }
}

impl GridArgs {
    pub fn resolve(&self) -> Result<Resolved, CliError> {
        self.common.resolve(
            self.branch,
            self.lambda_min,
            self.lambda_max,
            self.steps,
            self.output.clone(),
            self.format,
            None,
        )
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()?;
        }
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep(args) => {
            let resolved = args.resolve()?;
            let text = commands::sweep_table(&resolved)?;
            write_output(resolved.output_path.as_deref(), &text)
        }
        Command::Energy(args) => {
            let resolved = args.resolve()?;
            let text = commands::energy_table(&resolved)?;
            write_output(resolved.output_path.as_deref(), &text)
        }
        Command::Critical(args) => {
            let resolved = args.common.resolve(
                args.branch,
                None,
                None,
                None,
                None,
                None,
                args.bisect_tol,
            )?;
            let bracket = (
                args.bracket_lo.unwrap_or(DEFAULT_BRACKET.0),
                args.bracket_hi.unwrap_or(DEFAULT_BRACKET.1),
            );
            let text = commands::critical_line(&resolved, args.onset, bracket)?;
            write_output(None, &text)
        }
        Command::Fit(args) => {
            let resolved = args
                .common
                .resolve(None, None, None, None, None, None, None)?;
            let default_window = args.target.default_window();
            let window = (
                args.window_min.unwrap_or(default_window.0),
                args.window_max.unwrap_or(default_window.1),
            );
            let points = args.points.unwrap_or(commands::DEFAULT_FIT_POINTS);
            let text = commands::fit_report(&resolved, args.target, window, points)?;
            write_output(None, &text)
        }
        Command::Oracle(args) => {
            let resolved = args.common.resolve(
                args.branch,
                None,
                None,
                None,
                args.output.clone(),
                args.format,
                None,
            )?;
            let lambda = args.lambda.unwrap_or(commands::DEFAULT_ORACLE_LAMBDA);
            let cutoff = args.cutoff.unwrap_or(commands::DEFAULT_ORACLE_CUTOFF);
            let levels = args.levels.unwrap_or(commands::DEFAULT_ORACLE_LEVELS);
            let text = commands::oracle_table(&resolved, lambda, cutoff, levels)?;
            write_output(resolved.output_path.as_deref(), &text)
        }
    }
}
