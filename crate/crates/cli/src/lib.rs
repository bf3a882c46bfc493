//! Front end for the `salemlat` binary: input parsing, report assembly and
//! the subcommand implementations. `main.rs` only wires argv to these.

pub mod commands;
pub mod input;
pub mod report;

use salemlat_core::error::Error as CoreError;

pub use input::{parse_input, InputDocument, ParseError};
pub use report::{Format, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_ISOMETRY: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;
pub const EXIT_INVALID_CERTIFICATE: i32 = 5;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}: {1}")]
    Parse(String, ParseError),
    #[error("generator {name}: {source}")]
    NotIsometry { name: String, source: CoreError },
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub(crate) fn from_isometry(name: &str, e: CoreError) -> Self {
        match e {
            CoreError::NotIsometry { .. } | CoreError::DimensionMismatch { .. } => CliError::NotIsometry {
                name: name.to_string(),
                source: e,
            },
            other => CliError::Core(other),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(..) => EXIT_USAGE,
            CliError::NotIsometry { .. } => EXIT_NOT_ISOMETRY,
            CliError::Core(CoreError::InvalidInput(_) | CoreError::Precondition(_)) => EXIT_USAGE,
            CliError::Core(CoreError::NotIsometry { .. }) => EXIT_NOT_ISOMETRY,
            CliError::Core(_) => EXIT_INTERNAL,
        }
    }
}

/// Thread cap from `SALEMLAT_THREADS`; `None` means one per processor.
pub fn thread_cap(var: Option<&str>) -> Result<Option<usize>, CliError> {
    match var.map(str::trim) {
        None | Some("") => Ok(None),
        Some(s) => match s.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("SALEMLAT_THREADS must be a positive integer, got {s:?}"))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thread_cap_parsing() {
        assert_eq!(thread_cap(None).unwrap(), None);
        assert_eq!(thread_cap(Some("3")).unwrap(), Some(3));
        assert!(thread_cap(Some("0")).is_err());
        assert!(thread_cap(Some("many")).is_err());
    }
}
