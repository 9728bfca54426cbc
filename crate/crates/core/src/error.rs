use thiserror::Error;

/// Errors raised by the linear algebra, state constructors and measures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    /// A numerical routine did not produce a usable answer. `best` carries the
    /// best value reached before giving up, when there is one.
    #[error("numeric failure in {context}")]
    NumericFailure { context: String, best: Option<f64> },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn numeric(context: impl Into<String>, best: Option<f64>) -> Self {
        Error::NumericFailure {
            context: context.into(),
            best,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
