use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{location}: {message}")]
    Invalid { location: String, message: String },

    #[error("{location}: unknown {kind} '{name}'")]
    Dangling {
        location: String,
        kind: &'static str,
        name: String,
    },

    #[error("usage: {0}")]
    Usage(String),

    #[error("{0}")]
    Core(#[from] morita_core::Error),
}

impl CliError {
    pub fn invalid(location: impl Into<String>, message: impl ToString) -> Self {
        CliError::Invalid {
            location: location.into(),
            message: message.to_string(),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
