use thiserror::Error;

use crate::lattice::MultiIndex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("every cap must be at least 1, got {0:?}")]
    ZeroCap(Vec<u32>),

    #[error("degree cap must be at least 1")]
    ZeroDegreeCap,

    #[error("multi-index {index} has dimension {got}, expected {expected}")]
    DimensionMismatch {
        index: MultiIndex,
        got: usize,
        expected: usize,
    },

    #[error("the zero multi-index cannot be an exponent")]
    ZeroIndex,

    #[error("not a down-set: {missing} precedes {element} but is missing")]
    NotDownSet {
        missing: MultiIndex,
        element: MultiIndex,
    },

    #[error("exponent p = {0} is below 2")]
    ExponentBelowTwo(String),

    #[error("coordinate {coord} is out of range for dimension {dim}")]
    CoordinateOutOfRange { coord: usize, dim: usize },

    #[error("caps must be sorted ascending, got {0:?}")]
    UnsortedCaps(Vec<u32>),

    #[error("degree {degree} is too small, need at least {min}")]
    DegreeTooSmall { degree: u32, min: u32 },

    #[error("order l = {l} is outside 1..={max}")]
    OrderOutOfRange { l: u32, max: u32 },

    #[error("subspace coordinates do not match the exponent set")]
    AmbientMismatch,

    #[error("subspace basis is linearly dependent")]
    DependentBasis,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("moment value overflows 64 bits for X = {x_max}, degree {degree}, s = {s}")]
    MomentOverflow { x_max: u64, degree: u32, s: u32 },

    #[error(
        "count table for s = {s} needs up to {estimated_keys} keys (~{estimated_bytes} bytes), \
         above the cap of {cap} bytes"
    )]
    MemoryCap {
        s: u32,
        estimated_keys: u128,
        estimated_bytes: u128,
        cap: u64,
    },

    #[error("malformed count table dump: {0}")]
    MalformedDump(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
