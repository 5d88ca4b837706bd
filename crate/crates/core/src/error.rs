use thiserror::Error;

/// Errors raised by the library. Every variant carries enough context to
/// point at the offending input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cell ({row},{col}) is outside the diagram")]
    CellOutOfDiagram { row: usize, col: usize },
    #[error("rim hook is not removable from ({0})")]
    HookNotInPartition(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("({0}) is not a {1}-core")]
    NotACore(String, usize),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("size mismatch: partition of {partition} against cycle type of {cycle_type}")]
    SizeMismatch { partition: usize, cycle_type: usize },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("repeated point {0}")]
    RepeatedPoint(usize),
    #[error("point {point} out of range 1..={n}")]
    PointOutOfRange { point: usize, n: usize },
    #[error("not applicable: {0}")]
    Inapplicable(String),
    #[error("brute-force bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("not a {p}-element: {what}")]
    NotPElement { p: usize, what: String },
    #[error("depth mismatch: {0}")]
    DepthMismatch(String),
    #[error("element not in group: {0}")]
    NotInGroup(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
