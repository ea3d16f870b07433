//! The four families of vector cross products, their calibration forms, and
//! defect measures for the axioms and for linear Smith maps.
//!
//! # G₂ sign convention
//!
//! The associative 3-form on ℝ⁷ (basis e₁..e₇, written 1-based) is
//!
//! ```text
//! φ = e¹²³ + e¹⁴⁵ + e¹⁶⁷ + e²⁴⁶ − e²⁵⁷ − e³⁴⁷ − e³⁵⁶
//! ```
//!
//! and the cross product is J(a, b)ⁱ = φ(a, b, eᵢ), so J(e₁, e₂) = e₃ and
//! J(e₁, e₃) = −e₂. Every value derived from φ is relative to this choice;
//! alternative conventions can be loaded through [`table`].
//!
//! # Spin(7) form
//!
//! On ℝ⁸ = ℝ × ℝ⁷ with coordinates (θ, y₁..y₇) (θ is index 0), the Cayley
//! form is Φ = dθ ∧ φ + ∗φ with ∗ the Hodge star of ℝ⁷.

mod calibration;
mod cross;
mod linear;
mod sampling;
pub mod table;

pub use calibration::Calibration;
pub use cross::{AxiomDefect, CrossProduct, VcpKind};
pub use linear::{
    calibrated_defect, fundamental_identity_defect, generalized_calibration_gap, gray_defect,
    smith_defect_linear, GRAM_TOL,
};
pub use sampling::{random_orthonormal_frame, random_unit_vector};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VcpError {
    #[error("no {kind:?} cross product on R^{n}")]
    IllegalPairing { kind: VcpKind, n: usize },
    #[error("expected {expected} vectors of length {n}, got {got}")]
    ArgumentMismatch { expected: usize, n: usize, got: String },
    #[error("fold mismatch: {0}")]
    FoldMismatch(String),
    #[error("u-tuple is linearly dependent (normalized Gram determinant {0:e})")]
    DependentTuple(f64),
    #[error("frame is not orthonormal (Gram deviation {0:e})")]
    NonOrthonormalFrame(f64),
    #[error("malformed cross-product table: {0}")]
    Table(String),
    #[error(transparent)]
    Algebra(#[from] xalg::XalgError),
}

pub type Result<T> = std::result::Result<T, VcpError>;
