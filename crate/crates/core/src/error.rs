use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("group {0} has no observations")]
    EmptyGroup(u8),

    #[error("values ({values}) and allocations ({allocations}) differ in length")]
    LengthMismatch { values: usize, allocations: usize },

    #[error("non-finite observation at index {0}")]
    NonFiniteValue(usize),

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("insufficient sample size: {0}")]
    InsufficientSize(String),

    #[error("variance must be positive, got {0}")]
    NonPositiveVariance(f64),

    #[error("{name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("degrees of freedom must be positive, got {0}")]
    NonPositiveDf(f64),

    #[error("invalid chain configuration: {0}")]
    ConfigInvalid(String),

    #[error("credible level must lie in (0, 1], got {0}")]
    InvalidLevel(f64),

    #[error("all effect-size draws are identical")]
    DegenerateDraws,

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid interval: {0}")]
    InvalidInterval(String),
}
