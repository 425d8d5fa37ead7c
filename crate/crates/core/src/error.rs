use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside the domain an operation accepts.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An integral over an infinite range that does not converge for the given exponent.
    #[error("integral over [{lower}, inf) diverges for path-loss exponent {eta} (requires eta > 2)")]
    Divergent { lower: f64, eta: f64 },

    /// Adaptive quadrature ran out of its subdivision budget.
    #[error(
        "quadrature did not converge on [{lower}, {upper}]: best estimate {value} with error bound {est_error} (tolerance {abs_tol})"
    )]
    Quadrature {
        lower: f64,
        upper: f64,
        value: f64,
        est_error: f64,
        abs_tol: f64,
    },

    #[error("realization has {available} distances but {required} are required")]
    InsufficientPoints { required: usize, available: usize },

    #[error("no Monte Carlo trials retained out of {attempted} (every window draw had fewer than {required} points)")]
    NoTrialsRetained { attempted: usize, required: usize },

    /// The Gaussian interference approximation is undefined for these moments.
    #[error(
        "probabilistic model invalid: adjusted mean {mu_tilde} is below adjusted std/sqrt(2) (adjusted variance {sigma_tilde_sq})"
    )]
    ProbModelInvalid { mu_tilde: f64, sigma_tilde_sq: f64 },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("usage: {0}")]
    Usage(String),

    #[error("{op} {}: {source}", path.display())]
    Io {
        op: &'static str,
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// Wraps the error with a description of the computation that failed.
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, skipping context wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::Usage(_) | Error::InvalidParameter(_) | Error::Divergent { .. } => 2,
            Error::Io { .. } => 1,
            _ => 3,
        }
    }
}
