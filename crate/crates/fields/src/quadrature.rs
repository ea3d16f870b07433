use std::f64::consts::PI;

use rayon::prelude::*;

use crate::{FieldError, MapField, Point, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Box { lo: Point, hi: Point },
    Ball { center: Point, radius: f64 },
    Shell { center: Point, inner: f64, outer: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadratureRule {
    /// Midpoint rule on `cells`³ congruent cells.
    Midpoint { cells: usize },
    /// Midpoint rule in (t, θ, ϕ) with radius r = r_in + (r_out − r_in)·t^grading
    /// and exact solid angle per latitude band.
    Spherical { radial: usize, polar: usize, azimuthal: usize, grading: f64 },
}

impl QuadratureRule {
    pub fn tag(&self) -> &'static str {
        match self {
            QuadratureRule::Midpoint { .. } => "midpoint",
            QuadratureRule::Spherical { .. } => "spherical-midpoint",
        }
    }
}

impl Region {
    pub fn volume(&self) -> f64 {
        match *self {
            Region::Box { lo, hi } => (0..3).map(|a| hi[a] - lo[a]).product(),
            Region::Ball { radius, .. } => 4.0 / 3.0 * PI * radius.powi(3),
            Region::Shell { inner, outer, .. } => 4.0 / 3.0 * PI * (outer.powi(3) - inner.powi(3)),
        }
    }

    pub fn contains(&self, x: Point) -> bool {
        match *self {
            Region::Box { lo, hi } => (0..3).all(|a| lo[a] <= x[a] && x[a] <= hi[a]),
            Region::Ball { center, radius } => dist(x, center) <= radius,
            Region::Shell { center, inner, outer } => {
                let r = dist(x, center);
                inner <= r && r <= outer
            }
        }
    }

    /// Quadrature nodes and weights.
    pub fn nodes(&self, rule: &QuadratureRule) -> Result<Vec<(Point, f64)>> {
        if !(self.volume() > 0.0) {
            return Err(FieldError::EmptyRegion);
        }
        match (*self, *rule) {
            (Region::Box { lo, hi }, QuadratureRule::Midpoint { cells }) => {
                if cells == 0 {
                    return Err(FieldError::EmptyRegion);
                }
                let h = [0, 1, 2].map(|a| (hi[a] - lo[a]) / cells as f64);
                let w = h[0] * h[1] * h[2];
                let mut out = Vec::with_capacity(cells.pow(3));
                for i in 0..cells {
                    for j in 0..cells {
                        for k in 0..cells {
                            let c = [i, j, k];
                            out.push(([0, 1, 2].map(|a| lo[a] + (c[a] as f64 + 0.5) * h[a]), w));
                        }
                    }
                }
                Ok(out)
            }
            (Region::Ball { center, radius }, QuadratureRule::Spherical { radial, polar, azimuthal, grading }) => {
                spherical(center, 0.0, radius, radial, polar, azimuthal, grading)
            }
            (Region::Shell { center, inner, outer }, QuadratureRule::Spherical { radial, polar, azimuthal, grading }) => {
                spherical(center, inner, outer, radial, polar, azimuthal, grading)
            }
            (region, rule) => Err(FieldError::IncompatibleRule(format!("{} on {region:?}", rule.tag()))),
        }
    }
}

fn dist(a: Point, b: Point) -> f64 {
    crate::norm3([a[0] - b[0], a[1] - b[1], a[2] - b[2]])
}

fn spherical(
    center: Point,
    inner: f64,
    outer: f64,
    radial: usize,
    polar: usize,
    azimuthal: usize,
    grading: f64,
) -> Result<Vec<(Point, f64)>> {
    if radial == 0 || polar == 0 || azimuthal == 0 || !(grading >= 1.0) || !(inner >= 0.0) {
        return Err(FieldError::IncompatibleRule(format!(
            "spherical rule {radial}x{polar}x{azimuthal}, grading {grading}, inner radius {inner}"
        )));
    }
    let sphere = sphere_nodes([0.0; 3], 1.0, polar, azimuthal);
    let dt = 1.0 / radial as f64;
    let span = outer - inner;
    let mut out = Vec::with_capacity(radial * sphere.len());
    for i in 0..radial {
        let t = (i as f64 + 0.5) * dt;
        let r = inner + span * t.powf(grading);
        let dr = span * grading * t.powf(grading - 1.0) * dt;
        for node in &sphere {
            let x = [0, 1, 2].map(|a| center[a] + r * node.normal[a]);
            out.push((x, node.weight * r * r * dr));
        }
    }
    Ok(out)
}

/// Node on a latitude-longitude sphere mesh, with the unit tangent frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereNode {
    pub point: Point,
    pub normal: Point,
    pub e_theta: Point,
    pub e_phi: Point,
    pub weight: f64,
}

/// Cell-centered latitude-longitude mesh on ∂B(center; radius); weights are
/// exact band areas split evenly in longitude.
pub fn sphere_nodes(center: Point, radius: f64, polar: usize, azimuthal: usize) -> Vec<SphereNode> {
    let dtheta = PI / polar as f64;
    let dphi = 2.0 * PI / azimuthal as f64;
    let mut out = Vec::with_capacity(polar * azimuthal);
    for i in 0..polar {
        let (t0, t1) = (i as f64 * dtheta, (i + 1) as f64 * dtheta);
        let theta = 0.5 * (t0 + t1);
        let band = (t0.cos() - t1.cos()) * dphi * radius * radius;
        let (st, ct) = theta.sin_cos();
        for j in 0..azimuthal {
            let phi = (j as f64 + 0.5) * dphi;
            let (sp, cp) = phi.sin_cos();
            let normal = [st * cp, st * sp, ct];
            out.push(SphereNode {
                point: [0, 1, 2].map(|a| center[a] + radius * normal[a]),
                normal,
                e_theta: [ct * cp, ct * sp, -st],
                e_phi: [-sp, cp, 0.0],
                weight: band,
            });
        }
    }
    out
}

/// Σ wᵢ f(xᵢ), evaluated in parallel and summed in node order.
pub fn integrate<F>(nodes: &[(Point, f64)], f: F) -> Result<f64>
where
    F: Fn(Point) -> Result<f64> + Sync,
{
    let terms = nodes.par_iter().map(|&(x, w)| f(x).map(|v| w * v)).collect::<Result<Vec<_>>>()?;
    Ok(terms.iter().sum())
}

/// ∫_{∂B(center; radius)} |d_T u|³ dA with the tangential derivative taken
/// against the flat metric.
pub fn boundary_energy(u: &MapField, center: Point, radius: f64, polar: usize, azimuthal: usize) -> Result<f64> {
    if polar == 0 || azimuthal == 0 || !(radius > 0.0) {
        return Err(FieldError::EmptyRegion);
    }
    let nodes = sphere_nodes(center, radius, polar, azimuthal);
    let d = u.dim();
    let terms = nodes
        .par_iter()
        .map(|node| {
            let du = u.jacobian_at(node.point)?;
            let mut s = 0.0;
            for row in du.iter().take(d) {
                let a: f64 = (0..3).map(|k| row[k] * node.e_theta[k]).sum();
                let b: f64 = (0..3).map(|k| row[k] * node.e_phi[k]).sum();
                s += a * a + b * b;
            }
            Ok(node.weight * s.powf(1.5))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(terms.iter().sum())
}
