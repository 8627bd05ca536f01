use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: parse error at line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("invalid value for `{field}`: {reason}")]
    Validation { field: String, reason: String },

    #[error("unknown key `{key}`{}", suggestion.as_ref().map(|s| format!("; did you mean `{s}`?")).unwrap_or_default())]
    UnknownKey {
        key: String,
        suggestion: Option<String>,
    },

    #[error("usage: {0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed snapshot: {reason}")]
    Snapshot { path: PathBuf, reason: String },

    #[error(transparent)]
    Physics(#[from] mbsim_core::Error),
}

impl CliError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Process exit code: 2 configuration/usage, 3 physics singularity,
    /// 4 numerical failure, 1 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. }
            | CliError::Validation { .. }
            | CliError::UnknownKey { .. }
            | CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Snapshot { .. } => 1,
            CliError::Physics(e) => physics_exit_code(e),
        }
    }
}

pub fn physics_exit_code(e: &mbsim_core::Error) -> i32 {
    use mbsim_core::Error as E;
    match e {
        E::Config { .. } | E::Shape(_) | E::Domain(_) => 2,
        E::MossottiResonance { .. } | E::SingularDetuning { .. } | E::SingularParameter { .. } => 3,
        E::NumericalBlowup { .. } | E::Conditioning { .. } | E::Convergence { .. } => 4,
    }
}
