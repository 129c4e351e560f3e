use thiserror::Error;

/// Errors raised by validation, enumeration and counting.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot reduce an empty word")]
    EmptyWord,
    #[error("entry {value} at position {position} violates 0 <= e_j <= j-1")]
    NotInversionSequence { position: usize, value: u32 },
    #[error("{what}: n = {n} exceeds the guard {guard}")]
    GuardExceeded { what: &'static str, n: usize, guard: usize },
    #[error("rank is undefined: the sequence contains 102")]
    RankUndefined,
    #[error("invalid step {0:?}")]
    InvalidStep(char),
    #[error("path goes below its base line after step {0}")]
    BelowAxis(usize),
    #[error("forbidden consecutive factor {0}")]
    ForbiddenFactor(&'static str),
    #[error("path must end with {0}")]
    BadTerminal(char),
    #[error("path does not end at the required endpoint")]
    BadEndpoint,
    #[error("step ({a}, {b}) is not in F")]
    StepNotInF { a: u32, b: i64 },
    #[error("bad label: {0}")]
    BadLabel(String),
    #[error("labeled F-path goes below y = x after step {0}")]
    BelowDiagonal(usize),
    #[error("input contains the forbidden pattern {0}")]
    PatternViolation(String),
    #[error("tiling covers {found} cells, expected {expected}")]
    BadBoardLength { expected: usize, found: usize },
    #[error("malformed tiling: {0}")]
    BadTiling(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("series has a non-invertible constant term")]
    NonInvertibleConstantTerm,
    #[error("composition needs a zero constant term")]
    BadComposition,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
