//! Error type shared by every module of the crate.
//!
//! Errors fall into two broad classes that callers (notably the CLI) treat
//! differently: *validation* errors, where an argument or a configuration
//! file is malformed, and *numerical* errors, where the inputs were legal
//! but a computation could not meet its accuracy contract. The split is
//! exposed through [`SforError::exit_code`].

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, SforError>;

/// All failure modes of the library.
#[derive(Debug, Error)]
pub enum SforError {
    /// An argument violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An index was outside the valid range for the given object.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// A special function was evaluated at a point where it is undefined
    /// (for example the gamma function at a nonpositive integer).
    #[error("domain error: {0}")]
    Domain(String),

    /// A series or quadrature could not reach the requested tolerance
    /// within its term or subdivision budget. Carries the error estimate
    /// that was actually achieved.
    #[error("accuracy target not met: achieved {achieved:.3e}, requested {requested:.3e}")]
    Accuracy { achieved: f64, requested: f64 },

    /// A linear system that should have been symmetric positive definite
    /// was not (nonpositive pivot during factorization).
    #[error("matrix not positive definite: {0}")]
    NotSpd(String),

    /// A time step failed; wraps the underlying cause and records the
    /// time level at which stepping broke down.
    #[error("time step to level {level} failed")]
    StepFailed {
        level: usize,
        #[source]
        source: Box<SforError>,
    },

    /// Two temporal meshes that must share nodes (coarse grid vs.
    /// reference grid) do not line up.
    #[error("time grids are not aligned: {0}")]
    TimeAlignment(String),

    /// A computation produced a result that fails an internal sanity
    /// check (divergent integral, nonfinite intermediate, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A configuration file could not be parsed or failed validation.
    #[error("configuration error: {0}")]
    Config(String),

    /// Underlying I/O failure (reading a config, writing a table).
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl SforError {
    /// Process exit code the CLI should use for this error:
    /// `1` for validation problems, `2` for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            SforError::InvalidArgument(_)
            | SforError::IndexOutOfRange(_)
            | SforError::Domain(_)
            | SforError::Config(_)
            | SforError::Io(_) => 1,
            SforError::Accuracy { .. }
            | SforError::NotSpd(_)
            | SforError::TimeAlignment(_)
            | SforError::Numerical(_) => 2,
            SforError::StepFailed { source, .. } => source.exit_code(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_split_validation_from_numerics() {
        assert_eq!(SforError::InvalidArgument("x".into()).exit_code(), 1);
        assert_eq!(SforError::Config("x".into()).exit_code(), 1);
        assert_eq!(SforError::Domain("pole".into()).exit_code(), 1);
        assert_eq!(
            SforError::Accuracy {
                achieved: 1e-3,
                requested: 1e-12
            }
            .exit_code(),
            2
        );
        assert_eq!(SforError::NotSpd("pivot".into()).exit_code(), 2);
        let wrapped = SforError::StepFailed {
            level: 3,
            source: Box::new(SforError::NotSpd("pivot".into())),
        };
        assert_eq!(wrapped.exit_code(), 2);
    }

    #[test]
    fn messages_carry_context() {
        let e = SforError::Accuracy {
            achieved: 2.5e-7,
            requested: 1e-12,
        };
        let msg = e.to_string();
        assert!(msg.contains("2.500e-7"), "{msg}");
        assert!(msg.contains("1.000e-12"), "{msg}");
    }
}
