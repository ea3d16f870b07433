use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::{ChartDomain, FieldError, Mat3, MapField, MetricField, Point, Result, TargetStructure, Value, MAX_D};

type CurveFn = Arc<dyn Fn(Complex64) -> [Complex64; 3] + Send + Sync>;

/// Step and tolerance of the difference-quotient Cauchy-Riemann check.
const CR_STEP: f64 = 1e-5;
const CR_TOL: f64 = 1e-6;
/// Smallest admissible |∂f/∂ϕ|.
const FIBER_TOL: f64 = 1e-8;

/// A curve z ↦ v(z) ∈ ℂ³ with its complex derivative.
#[derive(Clone)]
pub struct HolomorphicCurve {
    value: CurveFn,
    derivative: CurveFn,
}

impl HolomorphicCurve {
    pub fn new(
        value: impl Fn(Complex64) -> [Complex64; 3] + Send + Sync + 'static,
        derivative: impl Fn(Complex64) -> [Complex64; 3] + Send + Sync + 'static,
    ) -> Self {
        Self { value: Arc::new(value), derivative: Arc::new(derivative) }
    }

    /// v(z) = (z, 0, 0).
    pub fn line() -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self::new(move |z| [z, zero, zero], move |_| [Complex64::new(1.0, 0.0), zero, zero])
    }

    pub fn constant(c: [Complex64; 3]) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self::new(move |_| c, move |_| [zero; 3])
    }

    pub fn value(&self, z: Complex64) -> [Complex64; 3] {
        (self.value)(z)
    }

    pub fn derivative(&self, z: Complex64) -> [Complex64; 3] {
        (self.derivative)(z)
    }

    /// |v(z+h) − v(z−h)|/2h − v′| + |(v(z+ih) − v(z−ih))/2h − iv′|: both
    /// partials must agree with the complex derivative.
    pub fn cauchy_riemann_defect(&self, z: Complex64) -> f64 {
        let h = CR_STEP;
        let dv = self.derivative(z);
        let (xp, xm) = (self.value(z + h), self.value(z - h));
        let ih = Complex64::new(0.0, h);
        let (yp, ym) = (self.value(z + ih), self.value(z - ih));
        let i = Complex64::new(0.0, 1.0);
        (0..3)
            .map(|j| ((xp[j] - xm[j]) / (2.0 * h) - dv[j]).norm() + ((yp[j] - ym[j]) / (2.0 * h) - i * dv[j]).norm())
            .sum()
    }
}

/// Fiber coordinate f(x₁, x₂, ϕ) with its gradient.
#[derive(Clone)]
pub struct FiberFunction {
    value: Arc<dyn Fn(Point) -> f64 + Send + Sync>,
    gradient: Arc<dyn Fn(Point) -> Point + Send + Sync>,
}

impl FiberFunction {
    pub fn new(
        value: impl Fn(Point) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(Point) -> Point + Send + Sync + 'static,
    ) -> Self {
        Self { value: Arc::new(value), gradient: Arc::new(gradient) }
    }

    /// f = s·ϕ.
    pub fn scaled_angle(s: f64) -> Self {
        Self::new(move |x| s * x[2], move |_| [0.0, 0.0, s])
    }

    pub fn value(&self, x: Point) -> f64 {
        (self.value)(x)
    }

    pub fn gradient(&self, x: Point) -> Point {
        (self.gradient)(x)
    }
}

/// The lift u(x, ϕ) = (f(x, ϕ), v(x)) into S¹ × ℂ³ with the induced metric
/// g₃ = μ²(dx₁² + dx₂²) + df², μ = |v′|.
#[derive(Clone)]
pub struct Lift {
    pub map: MapField,
    pub metric: MetricField,
    /// Worst Cauchy-Riemann defect over the grid.
    pub cr_defect: f64,
    /// Smallest |∂f/∂ϕ| over the grid.
    pub min_fiber_slope: f64,
    curve: HolomorphicCurve,
    fiber: FiberFunction,
}

fn mu_sq(dv: &[Complex64; 3]) -> f64 {
    dv.iter().map(|c| c.norm_sqr()).sum()
}

impl Lift {
    /// max |√det g₃ − μ² ∂f/∂ϕ| over the points: the volume form of g₃ must
    /// equal μ² f′ dϕ ∧ dx₁ ∧ dx₂.
    pub fn volume_condition_defect(&self, points: &[Point]) -> f64 {
        points
            .par_iter()
            .map(|&x| {
                let dv = self.curve.derivative(Complex64::new(x[0], x[1]));
                let want = mu_sq(&dv) * self.fiber.gradient(x)[2];
                let have = self.metric.matrix(x).determinant().max(0.0).sqrt();
                (have - want).abs()
            })
            .reduce(|| 0.0, f64::max)
    }
}

/// Builds the lift on a grid over (x₁, x₂, ϕ), after checking that v is
/// holomorphic and that ∂f/∂ϕ stays away from zero on the grid.
pub fn lift_holomorphic(curve: &HolomorphicCurve, fiber: &FiberFunction, domain: ChartDomain) -> Result<Lift> {
    let points = domain.points();
    let cr_defect = points
        .par_iter()
        .map(|x| curve.cauchy_riemann_defect(Complex64::new(x[0], x[1])))
        .reduce(|| 0.0, f64::max);
    if cr_defect > CR_TOL {
        return Err(FieldError::NonHolomorphic(cr_defect));
    }
    let min_fiber_slope = points.par_iter().map(|&x| fiber.gradient(x)[2].abs()).reduce(|| f64::INFINITY, f64::min);
    if min_fiber_slope < FIBER_TOL {
        return Err(FieldError::VanishingFiber(min_fiber_slope));
    }

    let (cv, fv) = (curve.clone(), fiber.clone());
    let eval = move |x: Point| {
        let v = cv.value(Complex64::new(x[0], x[1]));
        let mut out: Value = [0.0; MAX_D];
        out[0] = fv.value(x);
        for j in 0..3 {
            out[1 + 2 * j] = v[j].re;
            out[2 + 2 * j] = v[j].im;
        }
        out
    };
    let (cj, fj) = (curve.clone(), fiber.clone());
    let jac = move |x: Point| {
        let dv = cj.derivative(Complex64::new(x[0], x[1]));
        let mut du = [[0.0; 3]; MAX_D];
        du[0] = fj.gradient(x);
        for j in 0..3 {
            // ∂v/∂x₁ = v′, ∂v/∂x₂ = i v′
            du[1 + 2 * j] = [dv[j].re, -dv[j].im, 0.0];
            du[2 + 2 * j] = [dv[j].im, dv[j].re, 0.0];
        }
        du
    };
    let map = MapField::analytic(domain, TargetStructure::product_lift(), eval).with_jacobian(jac);

    let (cg, fg) = (curve.clone(), fiber.clone());
    let metric = MetricField::general(
        move |x| {
            let m2 = mu_sq(&cg.derivative(Complex64::new(x[0], x[1])));
            let df = nalgebra::Vector3::from(fg.gradient(x));
            Mat3::from_diagonal(&nalgebra::Vector3::new(m2, m2, 0.0)) + df * df.transpose()
        },
        f64::INFINITY,
    );
    Ok(Lift { map, metric, cr_defect, min_fiber_slope, curve: curve.clone(), fiber: fiber.clone() })
}
