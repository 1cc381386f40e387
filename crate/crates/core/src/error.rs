use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("degenerate diffusion: {0}")]
    DegenerateDiffusion(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("config error: {0}")]
    Config(String),
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
