use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HydraError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("resource limit: {needed} letters needed, budget is {budget}")]
    Resource { needed: u64, budget: u64 },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, HydraError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(HydraError::Domain(msg.into()))
}
