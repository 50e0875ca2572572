use thiserror::Error;

use crate::grid_complex::CellId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecError {
    #[error("{0} must be >= 1")]
    EmptyExtent(&'static str),

    #[error("degree {0} is outside 0..=2")]
    DegreeOutOfRange(usize),

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("forms live on different grids")]
    ShapeMismatch,

    #[error("operation requires a torus")]
    RequiresTorus,

    #[error("cell {0} is not addressable on this grid")]
    CellOutOfRange(CellId),

    #[error("Hodge star of a component at {0} leaves the window's ghost ring")]
    StarUndefinedOnWindowBoundary(CellId),

    #[error("the 2x2 reference ordering needs a 2x2 torus, got {n}x{m}")]
    OrderingShapeMismatch { n: usize, m: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("right-hand side has a harmonic component of norm {harmonic_norm:e}")]
    NotInRange { harmonic_norm: f64 },

    #[error("form is not closed")]
    NotClosed,

    #[error("linear solve failed: {0}")]
    SolverFailure(String),
}

pub type Result<T> = std::result::Result<T, DecError>;
