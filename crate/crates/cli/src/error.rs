use std::fmt;

use crate::ingest::IngestError;

/// Process exit status for each failure class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    Usage = 2,
    Data = 3,
    Numerical = 4,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ExitKind,
    pub error: anyhow::Error,
}

impl CliError {
    pub fn usage(error: impl Into<anyhow::Error>) -> Self {
        Self {
            kind: ExitKind::Usage,
            error: error.into(),
        }
    }

    pub fn data(error: impl Into<anyhow::Error>) -> Self {
        Self {
            kind: ExitKind::Data,
            error: error.into(),
        }
    }

    pub fn code(&self) -> i32 {
        self.kind as i32
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        CliError::data(e)
    }
}

impl From<horizon_core::Error> for CliError {
    fn from(e: horizon_core::Error) -> Self {
        use horizon_core::Error::*;
        let kind = match e {
            InvalidParameter { .. } | NonStationary { .. } | OutOfRange { .. } => ExitKind::Usage,
            InsufficientData { .. } | NonFinite { .. } => ExitKind::Data,
            Degenerate { .. } => ExitKind::Numerical,
        };
        Self {
            kind,
            error: e.into(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
