//! Flag and config-file resolution.
//!
//! Every run is described by the same parameter record; values come from
//! command-line flags first, then from an optional JSON config file given
//! with `--config`, then from built-in defaults. Flags always win over the
//! file so a stored configuration can be tweaked without editing it.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use dicke_core::{Branch, Tolerances};
use serde::Deserialize;

use crate::error::CliError;

pub const DEFAULT_OMEGA: f64 = 1.0;
pub const DEFAULT_OMEGA0: f64 = 1.0;
pub const DEFAULT_N_ATOMS: f64 = 1.0e6;
pub const DEFAULT_LAMBDA_MIN: f64 = 0.0;
pub const DEFAULT_LAMBDA_MAX: f64 = 1.0;
pub const DEFAULT_STEPS: usize = 201;
pub const DEFAULT_BRACKET: (f64, f64) = (0.5, 0.95);
pub const DEFAULT_BISECT_TOL: f64 = 1.0e-8;

/// Serialization target for tabular commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// On-disk shape of a `--config` file. All fields optional; unknown keys
/// are rejected so typos fail loudly instead of silently using defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub omega: Option<f64>,
    pub omega0: Option<f64>,
    pub n_atoms: Option<f64>,
    pub branch: Option<String>,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub steps: Option<usize>,
    pub output_path: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub tol_zero: Option<f64>,
    pub tol_im: Option<f64>,
    pub bisect_tol: Option<f64>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|err| {
            CliError::Usage(format!("config file {}: {err}", path.display()))
        })
    }

    pub fn branch(&self) -> Result<Option<Branch>, CliError> {
        self.branch
            .as_deref()
            .map(|name| Branch::from_str(name).map_err(|err| CliError::Usage(err.to_string())))
            .transpose()
    }
}

/// Fully resolved run parameters shared by the grid-style commands.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub omega: f64,
    pub omega0: f64,
    pub n_atoms: f64,
    pub branch: Option<Branch>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub steps: usize,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
    pub tol_zero: Option<f64>,
    pub tol_im: Option<f64>,
    pub bisect_tol: f64,
}

impl Resolved {
    pub fn require_branch(&self) -> Result<Branch, CliError> {
        self.branch.ok_or_else(|| {
            CliError::Usage("--branch is required (normal, sr1, sr2, sr3, sr4)".into())
        })
    }

    /// Thresholds for scans that straddle a transition. The relaxed
    /// classification margin keeps boundary points from flickering between
    /// zero-mode and spurious-complex verdicts; explicit flags override
    /// either component.
    pub fn scan_tolerances(&self) -> Tolerances {
        self.override_tols(Tolerances::classify(self.omega, self.omega0))
    }

    /// Thresholds for bisection on `branch`. The normal branch loses
    /// stability through a sharp real crossing, so the strict engine
    /// margin keeps the located boundary tight; the super-radiant branches
    /// carry a persistent zero mode whose numerical dust needs the relaxed
    /// margin to classify as zero rather than complex.
    pub fn critical_tolerances(&self, branch: Branch) -> Tolerances {
        let base = match branch {
            Branch::Normal => Tolerances::engine(self.omega, self.omega0),
            _ => Tolerances::classify(self.omega, self.omega0),
        };
        self.override_tols(base)
    }

    /// Strict thresholds for interior evaluations (fits, onset search).
    pub fn strict_tolerances(&self) -> Tolerances {
        self.override_tols(Tolerances::engine(self.omega, self.omega0))
    }

    fn override_tols(&self, base: Tolerances) -> Tolerances {
        Tolerances {
            tol_zero: self.tol_zero.unwrap_or(base.tol_zero),
            tol_im: self.tol_im.unwrap_or(base.tol_im),
        }
    }
}

/// Flag-over-file-over-default selection.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}
