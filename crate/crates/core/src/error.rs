use thiserror::Error;

/// Errors raised by trade algebra, enumeration and construction routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TradeError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("inconsistent trade: legs are not balanced")]
    InconsistentTrade,
    #[error("operation is undefined on the void trade")]
    UndefinedOnVoid,
    #[error("operation is undefined on the empty set")]
    UndefinedOnEmpty,
    #[error("invalid minimal-trade form: {0}")]
    InvalidMinimalForm(String),
    #[error("affine span of rank {rank} exceeds the materialization cap {cap}")]
    SpanTooLarge { rank: usize, cap: usize },
    #[error("universe of {v} elements exceeds the cap {cap}")]
    UniverseTooLarge { v: usize, cap: usize },
    #[error("block {mask:#x} does not fit a universe of {v} elements")]
    BlockOutOfRange { mask: u32, v: usize },
    #[error("coefficient overflow")]
    CoefficientOverflow,
    #[error("cannot compare trades over universes of {0} and {1} elements")]
    InvalidComparison(usize, usize),
    #[error("classification failure: volume {volume}, affine rank {afrk}, t = {t}")]
    ClassificationFailure { volume: usize, afrk: i32, t: usize },
    #[error("merge precondition violated: {0}")]
    MergePreconditionViolated(String),
    #[error("invalid template: {0}")]
    InvalidTemplate(String),
    #[error("enumeration aborted after {spent} units of budget (limit {limit})")]
    EnumerationAborted { spent: u64, limit: u64 },
}

pub type Result<T> = std::result::Result<T, TradeError>;
