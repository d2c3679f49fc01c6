use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("simplex {simplex:?} is missing its face {face:?}")]
    MissingFace { simplex: Vec<u32>, face: Vec<u32> },

    #[error("simplex {0:?} appears more than once")]
    DuplicateSimplex(Vec<u32>),

    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),

    #[error("simplex {simplex:?} at index {index} has value {value} below an earlier value")]
    DecreasingValue {
        simplex: Vec<u32>,
        index: usize,
        value: f64,
    },

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("cannot append a zero column")]
    ZeroColumn,

    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: i64, b: i64 },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("partitions {0} and {1} have different sums")]
    PartitionSumMismatch(String, String),

    #[error("invalid cup order {0}; orders start at 2")]
    InvalidOrder(usize),

    #[error("oracle refuses filtrations with {n} simplices (limit {limit})")]
    OracleTooLarge { n: usize, limit: usize },

    #[error("rank function is not interval decomposable at [{a}, {b}] in degree {degree}")]
    NegativeMultiplicity { degree: usize, a: usize, b: usize },

    #[error("point cloud is empty")]
    EmptyPointCloud,

    #[error("point cloud has no coordinates; a distance matrix is not enough")]
    CoordinatesRequired,

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("invalid distance matrix: {0}")]
    InvalidDistanceMatrix(String),

    #[error("unknown example {0:?}")]
    UnknownExample(String),

    #[error("unknown module spec {0:?}")]
    UnknownSpec(String),

    #[error("cannot read {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
