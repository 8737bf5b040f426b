use thiserror::Error;

use crate::amalgam::ValidationError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    /// A ball or enumeration would exceed the configured cap.
    #[error("capacity exceeded: {what} needs {projected}, cap is {cap}")]
    Capacity {
        what: &'static str,
        projected: u128,
        cap: usize,
    },

    #[error("validation failed: {0}")]
    Validation(ValidationError),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The finite evidence available under the caps does not decide the question.
    #[error("unresolved: {0}")]
    Unresolved(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn capacity(what: &'static str, projected: u128, cap: usize) -> Self {
        Error::Capacity {
            what,
            projected,
            cap,
        }
    }
}
