use std::fmt;

use fuzzy_saving::Error as CoreError;

/// Process exit status for each failure class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    Verification = 1,
    Config = 2,
    Solver = 3,
    MeanMismatch = 4,
}

impl ExitKind {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct CliError {
    pub kind: ExitKind,
    pub message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self.kind {
            ExitKind::Verification => "verification failed",
            ExitKind::Config => "config error",
            ExitKind::Solver => "solver failure",
            ExitKind::MeanMismatch => "mean-matching violation",
        };
        write!(f, "{label}: {}", self.message)
    }
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError { kind: ExitKind::Config, message: message.into() }
    }

    pub fn solver(message: impl Into<String>) -> Self {
        CliError { kind: ExitKind::Solver, message: message.into() }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        CliError { kind: ExitKind::Verification, message: message.into() }
    }

    /// Classify a core error raised while building problems from a config.
    pub fn from_setup(e: CoreError) -> Self {
        match e {
            CoreError::MeanMismatch { .. } => CliError { kind: ExitKind::MeanMismatch, message: e.to_string() },
            _ => CliError::config(e.to_string()),
        }
    }

    /// Classify a core error raised while solving.
    pub fn from_solve(e: CoreError) -> Self {
        match e {
            CoreError::MeanMismatch { .. } => CliError { kind: ExitKind::MeanMismatch, message: e.to_string() },
            CoreError::InvalidParameter(_) => CliError::config(e.to_string()),
            _ => CliError::solver(e.to_string()),
        }
    }
}
