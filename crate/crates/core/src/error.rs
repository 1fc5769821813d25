use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{what} did not converge (estimated error {achieved:.3e}, requested {requested:.3e})")]
    NoConvergence {
        what: String,
        achieved: f64,
        requested: f64,
    },
    #[error("root not bracketed: {0}")]
    Bracket(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
