use thiserror::Error;

/// Failure modes shared by every layer of the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("structure not stabilized up to precision {cap}")]
    NotStabilized { cap: u32 },
    #[error("module is not torsion at the working precision")]
    NotTorsion,
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
