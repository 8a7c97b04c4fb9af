use lifshitz_core::{Error, NumericsError};
use thiserror::Error;

pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_DOMAIN: i32 = 4;
pub const EXIT_NUMERICAL: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn core(context: impl Into<String>, source: Error) -> Self {
        CliError::Core {
            context: context.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } | CliError::Json(_) => EXIT_IO,
            CliError::Core { source, .. } => core_exit_code(source),
        }
    }
}

fn core_exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        return EXIT_NUMERICAL;
    }
    match e {
        Error::Config(_) => EXIT_CONFIG,
        Error::Domain(_)
        | Error::Extrapolation { .. }
        | Error::Numerics(NumericsError::Domain(_))
        | Error::Term {
            source: NumericsError::Domain(_),
            ..
        } => EXIT_DOMAIN,
        _ => EXIT_NUMERICAL,
    }
}

/// Attaches a context string to core results.
pub trait Context<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, CliError>;
}

impl<T> Context<T> for Result<T, Error> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, CliError> {
        self.map_err(|e| CliError::core(what(), e))
    }
}
