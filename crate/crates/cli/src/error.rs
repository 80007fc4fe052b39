use std::fmt;

use speckle_core::Error;

pub const EXIT_OTHER: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DIVERGED: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

/// Error carrying the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new(EXIT_INPUT, message)
    }

    pub fn mismatch(message: impl Into<String>) -> Self {
        Self::new(EXIT_MISMATCH, message)
    }

    /// Failure while reading a stored artifact (corpus, checkpoint): any
    /// format or integrity problem counts as a mismatch.
    pub fn artifact(err: Error) -> Self {
        match err {
            Error::Io { .. } | Error::Diverged { .. } => err.into(),
            other => Self::mismatch(other.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::Config(_) | Error::Domain(_) | Error::Dimension(_) | Error::Format(_) | Error::Length { .. } => {
                EXIT_INPUT
            }
            Error::Diverged { .. } => EXIT_DIVERGED,
            Error::Mismatch(_) | Error::Checksum { .. } => EXIT_MISMATCH,
            _ => EXIT_OTHER,
        };
        Self::new(code, err.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes() {
        assert_eq!(CliError::from(Error::Config("x".into())).code, 2);
        assert_eq!(
            CliError::from(Error::Diverged {
                epoch: 3,
                loss: f64::NAN
            })
            .code,
            3
        );
        assert_eq!(CliError::from(Error::Checksum { what: "a".into() }).code, 4);
        assert_eq!(CliError::from(Error::Retrieval("r".into())).code, 1);
        assert_eq!(CliError::artifact(Error::Format("bad magic".into())).code, 4);
    }
}
