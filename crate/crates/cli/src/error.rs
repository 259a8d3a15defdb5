use std::fmt;
use std::path::Path;
use std::process::ExitCode;

/// CLI failure, carrying the exit-code class.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, config, or input files: exit 2.
    Usage(String),
    /// The solver could not produce a result: exit 3.
    Numerical(String),
}

impl CliError {
    pub fn io(path: &Path, e: impl fmt::Display) -> Self {
        CliError::Usage(format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Numerical(_) => ExitCode::from(3),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<numerov_core::Error> for CliError {
    fn from(e: numerov_core::Error) -> Self {
        use numerov_core::Error as E;
        match e {
            E::ModeCountTooLarge { .. }
            | E::SolverFailure(_)
            | E::ZeroVector
            | E::EnergyCollision { .. }
            | E::LengthMismatch(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}
