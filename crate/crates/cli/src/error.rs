use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid instance: {0}")]
    Spec(String),
    #[error("{0}")]
    Core(#[from] dsub_core::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("extension requires finite model")]
    ExtensionNeedsFinite,
    #[error("{command} requires a {expected} model")]
    ModelMismatch { command: &'static str, expected: &'static str },
    #[error("choquet requires a [density] section")]
    MissingDensity,
}

pub type CliResult<T> = std::result::Result<T, CliError>;
