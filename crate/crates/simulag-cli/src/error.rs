use std::fmt;
use std::io;

use simulag::{IngestError, ReportError, SynthError};

/// CLI failure classified for the exit-code discipline:
/// 1 usage, 2 data, 3 I/O.
#[derive(Debug)]
pub enum AppError {
    Usage(String),
    Data(String),
    Io { message: String, broken_pipe: bool },
}

impl AppError {
    pub fn usage(msg: impl Into<String>) -> Self {
        AppError::Usage(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        AppError::Data(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        AppError::Io {
            message: msg.into(),
            broken_pipe: false,
        }
    }

    /// Downstream closed the pipe; exit quietly instead of diagnosing.
    pub fn is_broken_pipe(&self) -> bool {
        matches!(
            self,
            AppError::Io {
                broken_pipe: true,
                ..
            }
        )
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Usage(_) => 1,
            AppError::Data(_) => 2,
            AppError::Io { .. } => 3,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Usage(msg) | AppError::Data(msg) => f.write_str(msg),
            AppError::Io { message, .. } => f.write_str(message),
        }
    }
}

impl From<io::Error> for AppError {
    fn from(err: io::Error) -> Self {
        AppError::Io {
            broken_pipe: err.kind() == io::ErrorKind::BrokenPipe,
            message: err.to_string(),
        }
    }
}

impl From<IngestError> for AppError {
    fn from(err: IngestError) -> Self {
        match err {
            IngestError::Io(e) => e.into(),
        }
    }
}

impl From<SynthError> for AppError {
    fn from(err: SynthError) -> Self {
        AppError::Usage(err.to_string())
    }
}

impl From<ReportError> for AppError {
    fn from(err: ReportError) -> Self {
        match err {
            ReportError::Io(e) => e.into(),
            other => AppError::Data(other.to_string()),
        }
    }
}
