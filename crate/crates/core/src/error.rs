use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("invalid segment: {0}")]
    InvalidSegment(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// A certified-opaque scene whose numbers contradict the Jones bound.
    #[error("inconsistent scene: {0}")]
    InconsistentScene(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("scene parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
