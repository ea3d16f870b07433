use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;
use xalg::conformal_test;

use crate::{ChartDomain, FieldError, Mat3, MapField, Point, Result, MAX_D};

/// Relative tolerance of the pointwise conformality check on dF.
const CONFORMAL_TOL: f64 = 1e-9;

/// A chart self-map with its analytic differential.
#[derive(Clone)]
pub struct ConformalMap {
    eval: Arc<dyn Fn(Point) -> Point + Send + Sync>,
    jac: Arc<dyn Fn(Point) -> Mat3 + Send + Sync>,
}

impl ConformalMap {
    pub fn new(
        eval: impl Fn(Point) -> Point + Send + Sync + 'static,
        jac: impl Fn(Point) -> Mat3 + Send + Sync + 'static,
    ) -> Self {
        Self { eval: Arc::new(eval), jac: Arc::new(jac) }
    }

    pub fn identity() -> Self {
        Self::new(|x| x, |_| Mat3::identity())
    }

    /// x ↦ s·x.
    pub fn dilation(s: f64) -> Self {
        Self::new(move |x| x.map(|c| s * c), move |_| Mat3::identity() * s)
    }

    /// x ↦ c + s·x.
    pub fn similarity(center: Point, s: f64) -> Self {
        Self::new(move |x| [0, 1, 2].map(|a| center[a] + s * x[a]), move |_| Mat3::identity() * s)
    }

    /// x ↦ c + ρ²(x − c)/|x − c|², orientation-reversing.
    pub fn inversion(center: Point, radius: f64) -> Self {
        let rho2 = radius * radius;
        Self::new(
            move |x| {
                let y = sub(x, center);
                let s = rho2 / dot(y, y);
                [0, 1, 2].map(|a| center[a] + s * y[a])
            },
            move |x| inversion_jacobian(sub(x, center), rho2),
        )
    }

    /// Inversion in the sphere ∂B(c; ρ) followed by the reflection of the
    /// third coordinate through c: an orientation-preserving Möbius map.
    pub fn reflected_inversion(center: Point, radius: f64) -> Self {
        let rho2 = radius * radius;
        let flip = Mat3::from_diagonal(&nalgebra::Vector3::new(1.0, 1.0, -1.0));
        Self::new(
            move |x| {
                let y = sub(x, center);
                let s = rho2 / dot(y, y);
                [center[0] + s * y[0], center[1] + s * y[1], center[2] - s * y[2]]
            },
            move |x| flip * inversion_jacobian(sub(x, center), rho2),
        )
    }

    pub fn apply(&self, x: Point) -> Point {
        (self.eval)(x)
    }

    pub fn jacobian(&self, x: Point) -> Mat3 {
        (self.jac)(x)
    }

    /// Errors unless dF is a positive multiple of a rotation at every point.
    pub fn check(&self, points: &[Point]) -> Result<()> {
        points.par_iter().try_for_each(|&x| {
            let j = self.jacobian(x);
            let a = DMatrix::from_fn(3, 3, |r, c| j[(r, c)]);
            let test = conformal_test(&a, CONFORMAL_TOL);
            let reason = if test.degenerate {
                Some("differential vanishes".to_string())
            } else if !test.is_conformal {
                Some("differential is not conformal".to_string())
            } else if j.determinant() <= 0.0 {
                Some("differential reverses orientation".to_string())
            } else {
                None
            };
            match reason {
                Some(reason) => Err(FieldError::NotConformal { point: x, reason }),
                None => Ok(()),
            }
        })
    }
}

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// d(ρ²y/|y|²) = ρ²(I − 2yyᵀ/|y|²)/|y|².
fn inversion_jacobian(y: Point, rho2: f64) -> Mat3 {
    let s = dot(y, y);
    let v = nalgebra::Vector3::from(y);
    (Mat3::identity() - v * v.transpose() * (2.0 / s)) * (rho2 / s)
}

/// u∘F on `domain`, after checking that F is orientation-preserving conformal
/// at every grid point of `domain`. The composite carries the chain-rule
/// Jacobian when u has one.
pub fn precompose_conformal(u: &MapField, f: &ConformalMap, domain: ChartDomain) -> Result<MapField> {
    let (eval, jac) = u.parts().ok_or(FieldError::SampledEvaluation)?;
    f.check(&domain.points())?;
    let d = u.dim();
    let (fe, fj) = (f.clone(), f.clone());
    let composed = MapField::from_parts(domain, u.target().clone(), Arc::new(move |x| eval(fe.apply(x))), None);
    Ok(match jac {
        Some(jac) => composed.with_jacobian(move |x| {
            let du = jac(fj.apply(x));
            let df = fj.jacobian(x);
            let mut out = [[0.0; 3]; MAX_D];
            for (o, row) in out.iter_mut().zip(&du).take(d) {
                for a in 0..3 {
                    o[a] = (0..3).map(|b| row[b] * df[(b, a)]).sum();
                }
            }
            out
        }),
        None => composed,
    })
}
