use thiserror::Error;

use crate::quarter::Quarter;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors from parsing, validation, and the numerical engines.
///
/// Row numbers in CSV errors count data rows (the `date,value` header is
/// row 0 and is never reported).
#[derive(Debug, Error)]
pub enum Error {
    #[error("csv: expected header `date,value`, got {0:?}")]
    BadHeader(String),
    #[error("csv: no data rows after the header")]
    EmptyBody,
    #[error("csv row {row}: malformed quarter {text:?} (expected YYYYQn)")]
    BadQuarter { row: usize, text: String },
    #[error("csv row {row}: non-numeric or non-finite value {text:?}")]
    BadValue { row: usize, text: String },
    #[error("csv row {row}: quarter {found} does not follow {expected} (gap or duplicate)")]
    NonContiguous {
        row: usize,
        expected: Quarter,
        found: Quarter,
    },
    #[error("series too short: need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("level value at observation {index} is {value}, growth rates need strictly positive levels")]
    NonPositiveLevel { index: usize, value: f64 },
    #[error("max lag {max_lag} too large for series of length {len}")]
    MaxLagTooLarge { max_lag: usize, len: usize },
    #[error("series has zero variance")]
    ZeroVariance,
    #[error("embedding dimension {d} out of range 2..=10")]
    DimensionOutOfRange { d: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("split point {l} outside 1..={max}")]
    SplitOutOfRange { l: usize, max: usize },
    #[error("segment holds {got} points, expected {expected}")]
    SegmentSizeMismatch { expected: usize, got: usize },
    #[error("trimmed candidate range is empty for n = {n}, beta = {beta}")]
    TrimmedRangeEmpty { n: usize, beta: f64 },
    #[error("exact-grid supremum requires d = 2, got d = {d}")]
    ExactGridDimension { d: usize },
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error("subset index {index} outside 1..={d}")]
    SubsetIndexOutOfRange { index: usize, d: usize },
    #[error("subset must hold at least 2 distinct variable indices")]
    SubsetTooSmall,
    #[error("design matrix is rank deficient (column {column})")]
    RankDeficient { column: usize },
    #[error("need more observations than regressors: n = {n}, k = {k}")]
    NotEnoughObservations { n: usize, k: usize },
    #[error("break index {l} outside the usable range {lo}..={hi}")]
    BreakOutOfRange { l: usize, lo: usize, hi: usize },
}

impl Error {
    /// True for failures of the numerical engines (as opposed to bad input
    /// or configuration). The CLI maps these to a distinct exit code.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::RankDeficient { .. })
    }
}
