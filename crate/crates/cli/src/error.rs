use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flag values or combinations; exit code 2.
    #[error("{0}")]
    Usage(String),

    /// Anything wrong with the input data or its processing; exit code 1.
    #[error("{context}: {source}")]
    Data {
        context: String,
        #[source]
        source: fairkm_core::Error,
    },

    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{failed} of {total} datasets failed")]
    BenchFailures { failed: usize, total: usize },
}

impl CliError {
    pub fn data(context: impl Into<String>, source: fairkm_core::Error) -> Self {
        CliError::Data {
            context: context.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}
