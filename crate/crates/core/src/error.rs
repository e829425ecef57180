use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("generator σ{0} does not occur in the word")]
    NoSuchGenerator(usize),
    #[error("closure has {0} components, expected a knot")]
    NotAKnot(usize),
    #[error("cannot calibrate about column {column}: c_{next} = {count} < 2")]
    CannotCalibrate {
        column: usize,
        next: usize,
        count: usize,
    },
    #[error("operation requires a word in standard form")]
    RequiresStandardForm,
    #[error("arc ({0}, {1}) chosen twice")]
    DuplicateChoice(usize, usize),
    #[error("assignment does not belong to this diagram: {0}")]
    ModelMismatch(String),
    #[error("delegated: {0}")]
    Delegated(String),
    #[error("primality precheck failed: {0}")]
    FailsPrecheck(String),
    #[error("no construction case applied; trace: {0}")]
    CaseExhausted(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("search space too large: {candidates} candidate arcs exceeds cap {cap}")]
    TooLarge { candidates: usize, cap: usize },
    #[error("malformed certificate: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
