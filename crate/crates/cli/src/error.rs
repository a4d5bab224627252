use coact::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 2 for malformed input, 1 when valid input fails a mathematical
    /// precondition or check.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Json { .. } | CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::DivisionByZero
                | Error::CharTwo
                | Error::NotPrime(_)
                | Error::PrimeTooLarge(_)
                | Error::SquareParameter(_)
                | Error::NestedExtension
                | Error::BadIndex { .. }
                | Error::Arity { .. }
                | Error::FieldMismatch
                | Error::AlgebraMismatch
                | Error::NotSubset(..)
                | Error::Parse(_)
                | Error::Dimension(_) => 2,
                _ => 1,
            },
        }
    }

    pub fn kind(&self) -> String {
        match self {
            CliError::Core(e) => format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or("Error").to_string(),
            CliError::Io { .. } => "Io".into(),
            CliError::Json { .. } => "Json".into(),
            CliError::Usage(_) => "Usage".into(),
        }
    }
}
