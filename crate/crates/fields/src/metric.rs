use std::fmt;
use std::sync::Arc;

use crate::{FieldError, Mat3, Point, Result};

/// Below this √det the metric is treated as degenerate.
const DEGENERATE_TOL: f64 = 1e-14;

#[derive(Clone)]
pub enum MetricKind {
    Euclidean,
    /// g = λ(x)² δ
    Conformal(Arc<dyn Fn(Point) -> f64 + Send + Sync>),
    General(Arc<dyn Fn(Point) -> Mat3 + Send + Sync>),
}

/// Symmetric positive-definite metric on a chart, with a declared
/// eigenvalue bound Λ: every eigenvalue lies in [1/Λ, Λ].
#[derive(Clone)]
pub struct MetricField {
    kind: MetricKind,
    bound: f64,
}

/// g, its inverse and √det g at one point. A degenerate metric carries a
/// zero inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMetric {
    pub g: Mat3,
    pub inv: Mat3,
    pub sqrt_det: f64,
    pub degenerate: bool,
}

impl PointMetric {
    pub fn euclidean() -> Self {
        Self { g: Mat3::identity(), inv: Mat3::identity(), sqrt_det: 1.0, degenerate: false }
    }

    pub fn conformal(factor: f64) -> Self {
        let f2 = factor * factor;
        if f2 * factor.abs() < DEGENERATE_TOL {
            return Self { g: Mat3::identity() * f2, inv: Mat3::zeros(), sqrt_det: 0.0, degenerate: true };
        }
        Self { g: Mat3::identity() * f2, inv: Mat3::identity() / f2, sqrt_det: f2 * factor.abs(), degenerate: false }
    }

    pub fn general(g: Mat3) -> Self {
        let det = g.determinant();
        let sqrt_det = det.max(0.0).sqrt();
        match g.try_inverse() {
            Some(inv) if sqrt_det >= DEGENERATE_TOL => Self { g, inv, sqrt_det, degenerate: false },
            _ => Self { g, inv: Mat3::zeros(), sqrt_det, degenerate: true },
        }
    }
}

impl MetricField {
    pub const DEFAULT_BOUND: f64 = 2.0;

    pub fn euclidean() -> Self {
        Self { kind: MetricKind::Euclidean, bound: 1.0 }
    }

    pub fn conformal(factor: impl Fn(Point) -> f64 + Send + Sync + 'static, bound: f64) -> Self {
        Self { kind: MetricKind::Conformal(Arc::new(factor)), bound }
    }

    pub fn general(g: impl Fn(Point) -> Mat3 + Send + Sync + 'static, bound: f64) -> Self {
        Self { kind: MetricKind::General(Arc::new(g)), bound }
    }

    /// Pullback of the round metric of radius R: (2/(1 + |x/R|²))² δ.
    pub fn round_stereo(radius: f64) -> Self {
        Self::conformal(
            move |x| 2.0 / (1.0 + (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (radius * radius)),
            4.0,
        )
    }

    pub fn kind(&self) -> &MetricKind {
        &self.kind
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn is_euclidean(&self) -> bool {
        matches!(self.kind, MetricKind::Euclidean)
    }

    pub fn matrix(&self, x: Point) -> Mat3 {
        match &self.kind {
            MetricKind::Euclidean => Mat3::identity(),
            MetricKind::Conformal(f) => Mat3::identity() * f(x).powi(2),
            MetricKind::General(g) => g(x),
        }
    }

    pub fn at(&self, x: Point) -> PointMetric {
        match &self.kind {
            MetricKind::Euclidean => PointMetric::euclidean(),
            MetricKind::Conformal(f) => PointMetric::conformal(f(x)),
            MetricKind::General(g) => PointMetric::general(g(x)),
        }
    }

    /// Checks the declared eigenvalue bound at every given point.
    pub fn check_bound(&self, points: &[Point]) -> Result<()> {
        let lo = 1.0 / self.bound;
        for &x in points {
            let eig = self.matrix(x).symmetric_eigenvalues();
            for &e in eig.iter() {
                if e < lo * (1.0 - 1e-12) || e > self.bound * (1.0 + 1e-12) {
                    return Err(FieldError::MetricBound { eigenvalue: e, bound: self.bound });
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            MetricKind::Euclidean => "Euclidean",
            MetricKind::Conformal(_) => "Conformal",
            MetricKind::General(_) => "General",
        };
        f.debug_struct("MetricField").field("kind", &kind).field("bound", &self.bound).finish()
    }
}
