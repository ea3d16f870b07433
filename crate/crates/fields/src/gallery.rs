//! Reference maps into the associative target ℝ⁷.

use crate::{precompose_conformal, ChartDomain, ConformalMap, MapField, Result, TargetStructure, MAX_D};

/// x ↦ A x for a d×3 matrix given by rows, with its Jacobian.
pub fn linear(domain: ChartDomain, target: TargetStructure, rows: &[[f64; 3]]) -> MapField {
    let mut a = [[0.0; 3]; MAX_D];
    a[..rows.len()].copy_from_slice(rows);
    let d = target.dim();
    MapField::analytic(domain, target, move |x| {
        let mut v = [0.0; MAX_D];
        for i in 0..d {
            v[i] = a[i][0] * x[0] + a[i][1] * x[1] + a[i][2] * x[2];
        }
        v
    })
    .with_jacobian(move |_| a)
}

/// x ↦ s·(x₁, x₂, x₃, 0, 0, 0, 0).
pub fn associative_inclusion(domain: ChartDomain, scale: f64) -> MapField {
    linear(domain, TargetStructure::associative(), &[[scale, 0.0, 0.0], [0.0, scale, 0.0], [0.0, 0.0, scale]])
}

/// x ↦ (x₁, x₂, −x₃, 0, 0, 0, 0).
pub fn reversed_inclusion(domain: ChartDomain) -> MapField {
    linear(domain, TargetStructure::associative(), &[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]])
}

/// x ↦ (x₁, 2x₂, x₃, 0, 0, 0, 0).
pub fn anisotropic(domain: ChartDomain) -> MapField {
    linear(domain, TargetStructure::associative(), &[[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]])
}

/// The associative inclusion precomposed with the reflected inversion in
/// ∂B(center; radius).
pub fn mobius_inclusion(domain: ChartDomain, center: [f64; 3], radius: f64) -> Result<MapField> {
    precompose_conformal(&associative_inclusion(domain, 1.0), &ConformalMap::reflected_inversion(center, radius), domain)
}

/// x ↦ (x₁², 0, …, 0).
pub fn quadratic_probe(domain: ChartDomain) -> MapField {
    MapField::analytic(domain, TargetStructure::associative(), |x| {
        let mut v = [0.0; MAX_D];
        v[0] = x[0] * x[0];
        v
    })
    .with_jacobian(|x| {
        let mut j = [[0.0; 3]; MAX_D];
        j[0][0] = 2.0 * x[0];
        j
    })
}

/// The inclusion plus eps·(sin x₂, 0, 0, sin x₁ cos x₃, 0, x₁x₂, 0).
pub fn perturbed_inclusion(domain: ChartDomain, eps: f64) -> MapField {
    MapField::analytic(domain, TargetStructure::associative(), move |x| {
        let mut v = [0.0; MAX_D];
        v[0] = x[0] + eps * x[1].sin();
        v[1] = x[1];
        v[2] = x[2];
        v[3] = eps * x[0].sin() * x[2].cos();
        v[5] = eps * x[0] * x[1];
        v
    })
    .with_jacobian(move |x| {
        let mut j = [[0.0; 3]; MAX_D];
        j[0] = [1.0, eps * x[1].cos(), 0.0];
        j[1][1] = 1.0;
        j[2][2] = 1.0;
        j[3] = [eps * x[0].cos() * x[2].cos(), 0.0, -eps * x[0].sin() * x[2].sin()];
        j[5] = [eps * x[1], eps * x[0], 0.0];
        j
    })
}
