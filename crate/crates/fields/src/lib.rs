//! Maps from charted 3-domains into flat targets carrying a 2-fold cross
//! product, together with their pointwise and integrated diagnostics.
//!
//! A [`MapField`] is either analytic (a pure evaluator, optionally with its
//! Jacobian) or sampled on the grid of its [`ChartDomain`]. Jacobians are
//! stored row-major by target component: `du[i][α] = ∂uⁱ/∂x^α`.
//!
//! Energies carry the 1/(√3)³ prefactor, so a cross-product preserving
//! isometry has energy equal to the volume of its domain. Multiply by
//! [`UNPREFACTORED`] for the bare ∫|du|³.

mod conformal;
mod diagnostics;
mod differential;
mod domain;
mod extension;
mod field;
pub mod gallery;
pub mod io;
mod lift;
mod metric;
pub mod pointwise;
mod quadrature;
pub mod stereo;
mod target;

pub use conformal::{precompose_conformal, ConformalMap};
pub use diagnostics::{
    conformality_defect, energy, energy_density_field, energy_identity_defect, energy_on_grid, nharmonic_residual,
    pullback_form, smith_residual_field, EnergyReport, ScalarField,
};
pub use differential::{differential, DifferentialSample, Scheme};
pub use domain::{ChartDomain, ChartKind};
pub use extension::{homogeneous_extension, sphere_mesh_derivatives, HomogeneousExtension, SphereMesh};
pub use field::{Evaluator, JacobianFn, MapField, FD_STEP};
pub use lift::{lift_holomorphic, FiberFunction, HolomorphicCurve, Lift};
pub use metric::{MetricField, MetricKind, PointMetric};
pub use quadrature::{boundary_energy, integrate, sphere_nodes, QuadratureRule, Region, SphereNode};
pub use target::TargetStructure;

/// Largest supported target dimension.
pub const MAX_D: usize = 8;

/// Below this metric norm of du a point counts as critical.
pub const CRITICAL_TOL: f64 = 1e-12;

/// (√3)³, the factor between prefactored and bare energies.
pub const UNPREFACTORED: f64 = 5.196152422706632;

pub type Point = [f64; 3];
pub type Value = [f64; MAX_D];
pub type Jacobian = [[f64; 3]; MAX_D];
pub type Mat3 = nalgebra::Matrix3<f64>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldError {
    #[error("resolution {n} is below the stencil minimum {min}")]
    ResolutionTooLow { n: usize, min: usize },
    #[error("invalid chart bounds: {0}")]
    InvalidBounds(String),
    #[error("structure mismatch: {0}")]
    StructureMismatch(String),
    #[error("form of degree {got} where degree {expected} is required")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("region is empty")]
    EmptyRegion,
    #[error("quadrature rule does not fit the region: {0}")]
    IncompatibleRule(String),
    #[error("scheme unavailable: {0}")]
    SchemeUnavailable(String),
    #[error("sampled fields cannot be evaluated off the grid")]
    SampledEvaluation,
    #[error("map is not orientation-preserving conformal at {point:?}: {reason}")]
    NotConformal { point: Point, reason: String },
    #[error("stereographic projection is undefined at the south pole")]
    SouthPole,
    #[error("curve fails the Cauchy-Riemann check (defect {0:e})")]
    NonHolomorphic(f64),
    #[error("fiber derivative vanishes (min |f'| = {0:e})")]
    VanishingFiber(f64),
    #[error("boundary mesh is empty or has an odd azimuthal count")]
    EmptyMesh,
    #[error("metric eigenvalue {eigenvalue} outside [1/{bound}, {bound}]")]
    MetricBound { eigenvalue: f64, bound: f64 },
    #[error("grid file: {0}")]
    Format(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Vcp(#[from] vcp::VcpError),
    #[error(transparent)]
    Algebra(#[from] xalg::XalgError),
}

impl From<std::io::Error> for FieldError {
    fn from(e: std::io::Error) -> Self {
        FieldError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, FieldError>;

pub(crate) fn norm3(x: Point) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}
