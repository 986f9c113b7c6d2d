//! Process-level error classification.
//!
//! Every failure funnels into [`CliError`] so that the binary can map it to a
//! stable exit code: 0 success, 1 I/O, 2 bad input or configuration, 3 numeric
//! failure inside a computation, 4 bisection bracket does not straddle a sign
//! change. Scripts are expected to branch on these codes, so the mapping is a
//! compatibility contract and has its own unit test.

use dicke_core::CoreError;
use dicke_oracle::OracleError;

#[derive(Debug)]
pub enum CliError {
    /// Malformed flags, config files, or parameter values.
    Usage(String),
    /// Failure reading or writing files.
    Io(std::io::Error),
    /// A computation started but could not finish (diverged, unphysical, ...).
    Numeric(String),
    /// A critical-point search was given a bracket with no predicate flip.
    Bracket { lo: f64, hi: f64 },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
            CliError::Numeric(_) => 3,
            CliError::Bracket { .. } => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "invalid input: {msg}"),
            CliError::Io(err) => write!(f, "io error: {err}"),
            CliError::Numeric(msg) => write!(f, "numeric failure: {msg}"),
            CliError::Bracket { lo, hi } => write!(
                f,
                "bracket [{lo}, {hi}] does not straddle the boundary; widen or shift it"
            ),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err)
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::Bracket { lo, hi } => CliError::Bracket { lo, hi },
            CoreError::InvalidInput(_)
            | CoreError::Dimension(_)
            | CoreError::NonFinite(_)
            | CoreError::Domain(_) => CliError::Usage(err.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(err: OracleError) -> Self {
        match err {
            OracleError::InvalidInput(_) | OracleError::Resource { .. } => {
                CliError::Usage(err.to_string())
            }
            OracleError::Core(core) => CliError::from(core),
            other => CliError::Numeric(other.to_string()),
        }
    }
}
