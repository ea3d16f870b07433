use std::sync::Arc;

use crate::quadrature::sphere_nodes;
use crate::{norm3, ChartDomain, FieldError, MapField, Point, Result, SphereNode, TargetStructure, Value, MAX_D};

/// Cell-centered latitude-longitude mesh on the unit sphere. The azimuthal
/// count must be even so that differences can cross the poles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphereMesh {
    pub polar: usize,
    pub azimuthal: usize,
}

impl SphereMesh {
    pub fn new(polar: usize, azimuthal: usize) -> Result<Self> {
        if polar < 2 || azimuthal < 4 || azimuthal % 2 != 0 {
            return Err(FieldError::EmptyMesh);
        }
        Ok(Self { polar, azimuthal })
    }

    pub fn nodes(&self) -> Vec<SphereNode> {
        sphere_nodes([0.0; 3], 1.0, self.polar, self.azimuthal)
    }
}

/// Tangential derivatives (∂_θ u, (1/sin θ) ∂_ϕ u) at every mesh node from
/// nodal samples, by central differences; polar neighbors wrap across the
/// pole to the antipodal longitude.
pub fn sphere_mesh_derivatives(mesh: &SphereMesh, values: &[Value], d: usize) -> Vec<[[f64; MAX_D]; 2]> {
    let (np, na) = (mesh.polar, mesh.azimuthal);
    let dtheta = std::f64::consts::PI / np as f64;
    let dphi = 2.0 * std::f64::consts::PI / na as f64;
    let at = |i: usize, j: usize| &values[i * na + j % na];
    let mut out = Vec::with_capacity(values.len());
    for i in 0..np {
        let theta = (i as f64 + 0.5) * dtheta;
        for j in 0..na {
            let up = if i + 1 < np { at(i + 1, j) } else { at(i, j + na / 2) };
            let down = if i > 0 { at(i - 1, j) } else { at(i, j + na / 2) };
            let (east, west) = (at(i, j + 1), at(i, j + na - 1));
            let mut t = [[0.0; MAX_D]; 2];
            for c in 0..d {
                t[0][c] = (up[c] - down[c]) / (2.0 * dtheta);
                t[1][c] = (east[c] - west[c]) / (2.0 * dphi * theta.sin());
            }
            out.push(t);
        }
    }
    out
}

/// Radial extension v(rξ) = p + r(u(ξ) − p) of a boundary map on S².
#[derive(Clone, Debug)]
pub struct HomogeneousExtension {
    pub map: MapField,
    /// ∫_{B(1)} |Dv|³
    pub numerator: f64,
    /// ∫_{S²} |d_T u|³ + ∫_{S²} |u − p|³
    pub denominator: f64,
    /// numerator/denominator, 0 when the numerator vanishes.
    pub ratio: f64,
}

/// Extends `boundary` (a map on the unit sphere into flat ℝᵈ) radially
/// from `center`. Since |Dv|² = |u − p|² + |d_T u|² does not depend on r,
/// the ball integral is one third of a sphere integral.
pub fn homogeneous_extension(
    boundary: impl Fn(Point) -> Value + Send + Sync + 'static,
    d: usize,
    center: Value,
    mesh: &SphereMesh,
    domain: ChartDomain,
) -> Result<HomogeneousExtension> {
    let target = TargetStructure::euclidean(d)?;
    let nodes = mesh.nodes();
    if nodes.is_empty() {
        return Err(FieldError::EmptyMesh);
    }
    let values: Vec<Value> = nodes.iter().map(|n| boundary(n.normal)).collect();
    let tangents = sphere_mesh_derivatives(mesh, &values, d);

    let (mut numerator, mut boundary_term, mut radial_term) = (0.0, 0.0, 0.0);
    for ((node, v), t) in nodes.iter().zip(&values).zip(&tangents) {
        let radial: f64 = (0..d).map(|c| (v[c] - center[c]).powi(2)).sum();
        let tangential: f64 = (0..d).map(|c| t[0][c].powi(2) + t[1][c].powi(2)).sum();
        numerator += node.weight * (radial + tangential).powf(1.5) / 3.0;
        boundary_term += node.weight * tangential.powf(1.5);
        radial_term += node.weight * radial.powf(1.5);
    }
    let denominator = boundary_term + radial_term;
    let ratio = if numerator == 0.0 { 0.0 } else { numerator / denominator };

    let boundary = Arc::new(boundary);
    let map = MapField::analytic(domain, target, move |x| {
        let r = norm3(x);
        if r == 0.0 {
            return center;
        }
        let u = boundary([x[0] / r, x[1] / r, x[2] / r]);
        let mut v = [0.0; MAX_D];
        for c in 0..d {
            v[c] = center[c] + r * (u[c] - center[c]);
        }
        v
    });
    Ok(HomogeneousExtension { map, numerator, denominator, ratio })
}
