use thiserror::Error;

/// Failures raised by the evaluation routines.
///
/// Mathematical mismatches between two routes are never errors; the harness
/// encodes those in report statuses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error in {op}: {reason}")]
    Domain { op: &'static str, reason: String },

    #[error("{op} did not converge: {reason}")]
    Convergence { op: &'static str, reason: String },

    #[error("quadrature diverged after {levels} levels (last difference {difference})")]
    Divergence { levels: u32, difference: String },

    #[error("precondition violated in {op}: {reason}")]
    Precondition { op: &'static str, reason: String },

    #[error("unknown identity case `{0}`")]
    UnknownCase(String),

    #[error("unknown quantity `{0}`")]
    UnknownQuantity(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            op,
            reason: reason.into(),
        }
    }

    pub(crate) fn convergence(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Convergence {
            op,
            reason: reason.into(),
        }
    }

    pub(crate) fn param(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
