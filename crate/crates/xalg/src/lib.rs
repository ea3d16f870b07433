//! Exterior algebra on ℝⁿ for n ≤ 8.
//!
//! Degree-k elements are stored densely over the lexicographically ordered
//! k-subsets of `{0, .., n-1}`; every other crate in the workspace shares this
//! indexing through [`basis`].

pub mod basis;
mod linear;
mod multivector;

pub use linear::{
    conformal_test, determinant, exterior_power, frobenius, hadamard_gap, ConformalTest, LinearMap,
};
pub use multivector::Multivector;

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum XalgError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("degree {degree} exceeds ambient dimension {n}")]
    DegreeOverflow { degree: usize, n: usize },
    #[error("degree {r} outside the admissible range {lo}..={hi}")]
    DegreeOutOfRange { r: usize, lo: usize, hi: usize },
    #[error("ambient dimension {0} unsupported (must be 1..=8)")]
    UnsupportedDimension(usize),
    #[error("coefficient array has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("index set {0:?} is not strictly increasing within range")]
    InvalidIndexSet(Vec<usize>),
}

pub type Result<T> = std::result::Result<T, XalgError>;
