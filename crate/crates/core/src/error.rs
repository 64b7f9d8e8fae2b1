use thiserror::Error;

use crate::rates::Scheme;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid time allocation: {0}")]
    InvalidAllocation(String),

    #[error("allocation does not fit the {scheme} layout: {reason}")]
    SchemeLayout { scheme: Scheme, reason: String },

    #[error("oracle grid step {0} leaves no usable feasible point")]
    GridTooCoarse(f64),

    #[error("unknown config key `{0}`")]
    UnknownKey(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
