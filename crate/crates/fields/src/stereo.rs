//! Stereographic charts of the unit 3-sphere S³ ⊂ ℝ⁴.
//!
//! The south chart projects from the south pole p⁻ = (0, 0, 0, −1), so the
//! north pole p⁺ lands at the chart origin; the north chart projects from
//! p⁺. On the overlap the charts are related by y ↦ y/|y|².

use crate::{
    energy, ChartDomain, FieldError, MapField, MetricField, Point, QuadratureRule, Region, Result, TargetStructure,
    Value, MAX_D,
};

pub const NORTH_POLE: [f64; 4] = [0.0, 0.0, 0.0, 1.0];
pub const SOUTH_POLE: [f64; 4] = [0.0, 0.0, 0.0, -1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// Projection from the south pole.
    South,
    /// Projection from the north pole.
    North,
}

impl Chart {
    fn sign(self) -> f64 {
        match self {
            Chart::South => 1.0,
            Chart::North => -1.0,
        }
    }
}

/// σ(p) = (p₁, p₂, p₃)/(1 + p₄).
pub fn sigma(p: [f64; 4]) -> Result<Point> {
    let den = 1.0 + p[3];
    if den.abs() < 1e-300 {
        return Err(FieldError::SouthPole);
    }
    Ok([p[0] / den, p[1] / den, p[2] / den])
}

/// σ⁻¹(y) = (2y, 1 − |y|²)/(1 + |y|²).
pub fn sigma_inv(y: Point) -> [f64; 4] {
    chart_inverse(Chart::South, y)
}

pub fn chart_inverse(chart: Chart, y: Point) -> [f64; 4] {
    let s = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
    let den = 1.0 + s;
    [2.0 * y[0] / den, 2.0 * y[1] / den, 2.0 * y[2] / den, chart.sign() * (1.0 - s) / den]
}

/// ∂(σ⁻¹)ᵃ/∂y^β in the given chart.
pub fn chart_inverse_jacobian(chart: Chart, y: Point) -> [[f64; 3]; 4] {
    let s = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
    let den = 1.0 + s;
    let mut j = [[0.0; 3]; 4];
    for a in 0..3 {
        for b in 0..3 {
            let delta = if a == b { 1.0 } else { 0.0 };
            j[a][b] = 2.0 * delta / den - 4.0 * y[a] * y[b] / (den * den);
        }
    }
    for b in 0..3 {
        j[3][b] = chart.sign() * (-4.0 * y[b] / (den * den));
    }
    j
}

/// Conformal factor of the round metric, 2/(1 + |y|²).
pub fn factor(y: Point) -> f64 {
    2.0 / (1.0 + y[0] * y[0] + y[1] * y[1] + y[2] * y[2])
}

/// Change of chart y ↦ y/|y|², valid away from the origin.
pub fn transition(y: Point) -> Result<Point> {
    let s = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
    if s == 0.0 {
        return Err(FieldError::SouthPole);
    }
    Ok([y[0] / s, y[1] / s, y[2] / s])
}

/// The identity of S³ written in one chart: y ↦ σ⁻¹(y) ∈ ℝ⁴.
pub fn sphere_identity(chart: Chart, domain: ChartDomain) -> MapField {
    let target = TargetStructure::euclidean(4).expect("dimension 4 is supported");
    MapField::analytic(domain, target, move |y| {
        let p = chart_inverse(chart, y);
        let mut v: Value = [0.0; MAX_D];
        v[..4].copy_from_slice(&p);
        v
    })
    .with_jacobian(move |y| {
        let j = chart_inverse_jacobian(chart, y);
        let mut out = [[0.0; 3]; MAX_D];
        out[..4].copy_from_slice(&j);
        out
    })
}

/// Prefactored energies of the identity of S³ over the unit ball of each
/// chart; the two balls are the closed hemispheres.
pub fn s3_identity_energy(rule: &QuadratureRule) -> Result<(f64, f64)> {
    let domain = ChartDomain::stereo(-1.0, 1.0, ChartDomain::MIN_RESOLUTION)?;
    let g = MetricField::round_stereo(1.0);
    let ball = Region::Ball { center: [0.0; 3], radius: 1.0 };
    let south = energy(&sphere_identity(Chart::South, domain), &g, &ball, rule)?.total;
    let north = energy(&sphere_identity(Chart::North, domain), &g, &ball, rule)?.total;
    Ok((south, north))
}
