use thiserror::Error;

/// Errors produced by the graph, synthesis and search routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OnngError {
    #[error("points {first} and {second} are identical")]
    DuplicatePoints { first: usize, second: usize },

    #[error("point {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("point {index} has a non-finite coordinate")]
    NonFiniteCoordinate { index: usize },

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("invalid rank assignment: {0}")]
    InvalidRanks(String),

    #[error("order is not a permutation of 0..{n}: missing {missing:?}, duplicate {duplicate:?}, out of range {out_of_range:?}")]
    NotAPermutation {
        n: usize,
        missing: Vec<usize>,
        duplicate: Vec<usize>,
        out_of_range: Vec<usize>,
    },

    #[error("vertex {id} out of range for a space of {n} vertices")]
    VertexOutOfRange { id: usize, n: usize },

    #[error("{what} needs at least {min} vertices, got {got}")]
    TooFewVertices {
        what: &'static str,
        min: usize,
        got: usize,
    },

    #[error("line coordinates must be strictly increasing (positions {0} and {1})")]
    NotIncreasing(usize, usize),

    #[error("hard line set P_{k} exceeds the size budget (k <= {max})")]
    HardLineTooLarge { k: u32, max: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("triple ({0}, {1}, {2}) is not strictly ascending")]
    NotAscending(usize, usize, usize),

    #[error("{what} refuses n = {n}: exhaustive enumeration is limited to n <= {max}")]
    GuardExceeded {
        what: &'static str,
        n: usize,
        max: usize,
    },
}

pub type Result<T, E = OnngError> = std::result::Result<T, E>;
