use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the set on which a closed form is defined.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("singular expression in {op}: {detail}")]
    Singular { op: &'static str, detail: String },

    /// The regularized Gram matrix is too close to singular to factor reliably.
    #[error("ill-conditioned regularized Gram matrix (condition estimate {condition:.3e})")]
    IllConditioned { condition: f64 },

    #[error("trial {trial}: {source}")]
    Trial {
        trial: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("{skipped} of {trials} trials skipped as ill-conditioned (limit is 1%)")]
    TooManySkips { skipped: usize, trials: usize },

    #[error("search domain is empty")]
    EmptyDomain,

    #[error("no sign change of the residual on ({lo}, {hi})")]
    NoBracket { lo: f64, hi: f64 },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("{context}: {source}")]
    Row {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// True for failures that originate in the numerics rather than in the input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Validation(_) | Error::Domain { .. } | Error::Io { .. } => false,
            Error::Row { source, .. } | Error::Trial { source, .. } => source.is_numerical(),
            _ => true,
        }
    }
}
