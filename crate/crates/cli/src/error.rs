use std::fmt;

/// Failure of a CLI run; the variant fixes the exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad input: unknown keys, missing values, rejected parameters.
    Validation(String),
    /// Solver or convergence failure, or a failed verification check.
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

/// Tags a library error with the stage that raised it.
pub fn at(stage: impl fmt::Display) -> impl FnOnce(qladder_core::Error) -> CliError {
    move |e| {
        let msg = format!("{stage}: {e}");
        if e.is_validation() {
            CliError::Validation(msg)
        } else {
            CliError::Numerical(msg)
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
