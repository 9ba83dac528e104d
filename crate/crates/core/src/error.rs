use thiserror::Error;

use crate::lattice::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a point needs at least one coordinate")]
    EmptyPoint,

    #[error("point set is empty")]
    EmptySet,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("duplicate point {0}")]
    DuplicatePoint(Point),

    #[error("point {point} is not a vertex of {grid}")]
    OutOfBounds { point: Point, grid: String },

    #[error("side length {side} is too small for {kind}; need at least {min}")]
    InvalidSide {
        kind: &'static str,
        side: u64,
        min: u64,
    },

    #[error("dimension {dim} is outside the supported range {min}..={max}")]
    UnsupportedDimension { dim: usize, min: usize, max: usize },

    #[error("index {index} is outside 1..={max}")]
    IndexOutOfRange { index: u64, max: u64 },

    #[error("integer overflow while {0}")]
    Overflow(&'static str),

    #[error("sequence is empty")]
    EmptySequence,

    #[error("{found} points are fewer than the {required} needed")]
    BelowThreshold { found: u64, required: u64 },

    #[error("coordinate axis {axis} is not monotone along the list order")]
    NotMonotone { axis: usize },

    #[error("grid has {vertices} vertices, above the cap of {cap}")]
    VertexCapExceeded { vertices: u64, cap: u64 },

    #[error("{0} is not supported here")]
    UnsupportedGrid(String),

    #[error("parse error: {0}")]
    Parse(String),
}
