use std::path::Path;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] sentcause_core::Error),
    #[error("{path}: {source}")]
    InFile { path: String, source: Box<Error> },
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("line {line}: cannot parse date `{value}`")]
    UnparsableDate { line: u64, value: String },
    #[error("line {line}: cannot parse value `{value}`")]
    UnparsableValue { line: u64, value: String },
    #[error("line {line}: unknown label `{value}` (expected `pos` or `neg`)")]
    UnparsableLabel { line: u64, value: String },
    #[error("line {line}: {source}")]
    AtLine {
        line: u64,
        source: sentcause_core::Error,
    },
    #[error("model file line {line}: {message}")]
    ModelFormat { line: usize, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Machine-readable kind; file context is looked through.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Core(e) | Error::AtLine { source: e, .. } => e.kind(),
            Error::InFile { source, .. } => source.kind(),
            Error::MissingColumn(_) => "MissingColumn",
            Error::UnparsableDate { .. } => "UnparsableDate",
            Error::UnparsableValue { .. } => "UnparsableValue",
            Error::UnparsableLabel { .. } => "UnparsableLabel",
            Error::ModelFormat { .. } => "ModelFormat",
            Error::Config(_) => "Config",
            Error::Csv(_) => "Csv",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }

    pub fn in_file(self, path: &Path) -> Error {
        Error::InFile {
            path: path.display().to_string(),
            source: Box::new(self),
        }
    }

    /// The core error underneath any file or line context.
    pub fn core(&self) -> Option<&sentcause_core::Error> {
        match self {
            Error::Core(e) | Error::AtLine { source: e, .. } => Some(e),
            Error::InFile { source, .. } => source.core(),
            _ => None,
        }
    }
}
