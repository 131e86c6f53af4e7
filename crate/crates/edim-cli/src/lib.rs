//! Command implementations behind the `edim` binary.
//!
//! Each subcommand is an ordinary function from a typed argument struct to
//! a [`CmdOutput`] (rendered stdout plus exit code), so integration tests
//! drive the exact production paths without spawning processes. The binary
//! in `main.rs` is a thin clap wrapper around these functions.
//!
//! Exit-code contract: 0 success; 1 usage error (diagnostics on stderr);
//! 2 structurally valid input outside the supported theory; 3 a verify
//! sweep with mismatches outside the flagged degenerate tuples, or a
//! concordance table with failing rows.

use edim_core::EdError;

pub mod ed;
pub mod oracle;
pub mod params;
pub mod render;
pub mod sylow;
pub mod table;
pub mod verify;

/// Version stamp embedded in every JSON payload.
pub const SCHEMA_VERSION: u32 = 1;

/// Output rendering selected by `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Format, CliError> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(CliError::Usage(format!(
                "unknown format {other:?}; expected text, json, or csv"
            ))),
        }
    }
}

/// A failed command: the variant decides the exit code, the payload is the
/// diagnostic printed to stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Malformed invocation; exit 1.
    Usage(String),
    /// Valid input the theory does not cover; exit 2.
    Unsupported(String),
    /// A bug surfaced as an error; exit 1 with a distinct prefix.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Internal(_) => 1,
            CliError::Unsupported(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Unsupported(m) => write!(f, "unsupported: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

/// Library rejections mapped onto the exit-code contract: malformed input
/// is a usage error; the defining prime and uncovered congruence classes
/// are the out-of-theory path.
pub fn map_core_err(e: EdError) -> CliError {
    match e {
        EdError::BadParameter(m) => CliError::Usage(m),
        EdError::DefiningPrime { .. } => CliError::Unsupported(e.to_string()),
        EdError::UnsupportedCase(m) => CliError::Unsupported(m),
        EdError::BudgetExceeded { .. } => CliError::Usage(e.to_string()),
    }
}

/// Rendered output of a successful command dispatch.
#[derive(Debug, Clone)]
pub struct CmdOutput {
    pub stdout: String,
    pub exit_code: i32,
}

impl CmdOutput {
    pub fn ok(stdout: String) -> CmdOutput {
        CmdOutput {
            stdout,
            exit_code: 0,
        }
    }
}
