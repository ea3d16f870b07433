//! Diagnostics of a single Jacobian against a single metric.

use vcp::CrossProduct;

use crate::{Jacobian, Mat3, PointMetric, TargetStructure, CRITICAL_TOL, MAX_D, UNPREFACTORED};

/// |du|²_g = uⁱ_α uⁱ_β g^{αβ}.
pub fn norm_sq(du: &Jacobian, d: usize, pm: &PointMetric) -> f64 {
    let mut s = 0.0;
    for row in du.iter().take(d) {
        for a in 0..3 {
            for b in 0..3 {
                s += row[a] * row[b] * pm.inv[(a, b)];
            }
        }
    }
    s.max(0.0)
}

/// (1/(√3)³)|du|³_g √g.
pub fn energy_density(du: &Jacobian, d: usize, pm: &PointMetric) -> f64 {
    bare_energy_density(du, d, pm) / UNPREFACTORED
}

/// |du|³_g √g.
pub fn bare_energy_density(du: &Jacobian, d: usize, pm: &PointMetric) -> f64 {
    norm_sq(du, d, pm).powf(1.5) * pm.sqrt_det
}

/// (u*α)(∂₁, ∂₂, ∂₃) for a 3-form given by its nonzero terms.
pub fn pullback_density(du: &Jacobian, terms: &[([usize; 3], f64)]) -> f64 {
    terms
        .iter()
        .map(|&([a, b, c], v)| {
            let (r, s, t) = (du[a], du[b], du[c]);
            let det = r[0] * (s[1] * t[2] - s[2] * t[1]) - r[1] * (s[0] * t[2] - s[2] * t[0])
                + r[2] * (s[0] * t[1] - s[1] * t[0]);
            v * det
        })
        .sum()
}

/// Pointwise defect of the energy identity: energy density minus u*α.
pub fn energy_identity_density(du: &Jacobian, pm: &PointMetric, target: &TargetStructure) -> f64 {
    energy_density(du, target.dim(), pm) - pullback_density(du, target.form_terms())
}

/// J(u_a, u_b) for the cyclic pairs (a, b) = (1, 2), (2, 0), (0, 1).
pub fn cross_terms(du: &Jacobian, cross: &CrossProduct) -> [[f64; MAX_D]; 3] {
    let d = cross.dim();
    let col = |a: usize| {
        let mut c = [0.0; MAX_D];
        for i in 0..d {
            c[i] = du[i][a];
        }
        c
    };
    let cols = [col(0), col(1), col(2)];
    let mut out = [[0.0; MAX_D]; 3];
    for (gamma, (a, b)) in [(1, 2), (2, 0), (0, 1)].into_iter().enumerate() {
        cross.apply2_into(&cols[a][..d], &cols[b][..d], &mut out[gamma][..d]);
    }
    out
}

/// Norm over (i, λ) of (1/√3)|du|_g uⁱ_λ − (1/√g) Σ_γ g_{λγ} J(u_a, u_b)ⁱ.
///
/// At critical points only the cross-product term remains; at degenerate
/// metric points that term is taken without the 1/√g factor.
pub fn smith_residual(du: &Jacobian, pm: &PointMetric, cross: &CrossProduct) -> f64 {
    let d = cross.dim();
    let jt = cross_terms(du, cross);
    let norm = if pm.degenerate { 0.0 } else { norm_sq(du, d, pm).sqrt() };
    let lhs_scale = if norm < CRITICAL_TOL { 0.0 } else { norm / 3f64.sqrt() };
    let rhs_scale = if pm.degenerate { 1.0 } else { 1.0 / pm.sqrt_det };
    let mut s = 0.0;
    for i in 0..d {
        for l in 0..3 {
            let rhs: f64 = (0..3).map(|g| pm.g[(l, g)] * jt[g][i]).sum::<f64>() * rhs_scale;
            s += (lhs_scale * du[i][l] - rhs).powi(2);
        }
    }
    s.sqrt()
}

/// ‖duᵀdu − (1/3)|du|²_g g‖_F.
pub fn conformality_defect(du: &Jacobian, d: usize, pm: &PointMetric) -> f64 {
    let pull = pullback_metric(du, d);
    (pull - pm.g * (norm_sq(du, d, pm) / 3.0)).norm()
}

/// duᵀdu, the pullback of the flat target metric.
pub fn pullback_metric(du: &Jacobian, d: usize) -> Mat3 {
    let mut m = Mat3::zeros();
    for row in du.iter().take(d) {
        for a in 0..3 {
            for b in 0..3 {
                m[(a, b)] += row[a] * row[b];
            }
        }
    }
    m
}

/// √g g^{αβ}|du|_g uⁱ_β, the flux whose divergence is the 3-Laplacian.
pub fn harmonic_flux(du: &Jacobian, d: usize, pm: &PointMetric) -> Jacobian {
    let norm = norm_sq(du, d, pm).sqrt();
    let mut f = [[0.0; 3]; MAX_D];
    for (out, row) in f.iter_mut().zip(du).take(d) {
        for a in 0..3 {
            out[a] = pm.sqrt_det * norm * (0..3).map(|b| pm.inv[(a, b)] * row[b]).sum::<f64>();
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inclusion(signs: [f64; 3], scale: f64) -> Jacobian {
        let mut du = [[0.0; 3]; MAX_D];
        for a in 0..3 {
            du[a][a] = signs[a] * scale;
        }
        du
    }

    #[test]
    fn associative_inclusion() {
        let t = TargetStructure::associative();
        let pm = PointMetric::euclidean();
        let du = inclusion([1.0; 3], 1.0);
        assert!(smith_residual(&du, &pm, t.cross().unwrap()) < 1e-15);
        assert!((energy_density(&du, 7, &pm) - 1.0).abs() < 1e-15);
        assert_eq!(pullback_density(&du, t.form_terms()), 1.0);
        assert!(energy_identity_density(&du, &pm, &t).abs() < 1e-15);
    }

    #[test]
    fn reversed_inclusion() {
        let t = TargetStructure::associative();
        let pm = PointMetric::euclidean();
        let du = inclusion([1.0, 1.0, -1.0], 1.0);
        // each λ-row of the residual has length 2
        assert!((smith_residual(&du, &pm, t.cross().unwrap()) - 2.0 * 3f64.sqrt()).abs() < 1e-14);
        assert!((energy_identity_density(&du, &pm, &t) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn smith_residual_is_conformally_invariant() {
        let t = TargetStructure::associative();
        let du = inclusion([1.0; 3], 0.8);
        // du = 0.8 ι is Smith for g = c² δ at any c
        for c in [0.5, 1.0, 3.0] {
            assert!(smith_residual(&du, &PointMetric::conformal(c), t.cross().unwrap()) < 1e-14);
            assert!(conformality_defect(&du, 7, &PointMetric::conformal(c)) < 1e-14);
        }
    }

    #[test]
    fn critical_and_degenerate_points() {
        let t = TargetStructure::associative();
        let zero = [[0.0; 3]; MAX_D];
        assert_eq!(smith_residual(&zero, &PointMetric::euclidean(), t.cross().unwrap()), 0.0);
        assert_eq!(conformality_defect(&zero, 7, &PointMetric::euclidean()), 0.0);
        let mut rank_one = zero;
        rank_one[0] = [0.3, -0.2, 1.0];
        let g = pullback_metric(&rank_one, 7);
        assert_eq!(smith_residual(&rank_one, &PointMetric::general(g), t.cross().unwrap()), 0.0);
    }

    #[test]
    fn anisotropic_map_is_not_conformal() {
        let mut du = inclusion([1.0; 3], 1.0);
        du[1][1] = 2.0;
        // duᵀdu = diag(1, 4, 1), |du|² = 6
        let want = ((1.0f64 - 2.0).powi(2) * 2.0 + (4.0f64 - 2.0).powi(2)).sqrt();
        assert!((conformality_defect(&du, 7, &PointMetric::euclidean()) - want).abs() < 1e-14);
    }
}
