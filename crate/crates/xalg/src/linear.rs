use nalgebra::DMatrix;

use crate::basis::{binomial, subsets};
use crate::{Result, XalgError};

/// Dense real matrix acting on column vectors.
pub type LinearMap = DMatrix<f64>;

/// Frobenius norm sqrt(tr(AᵀA)).
pub fn frobenius(a: &LinearMap) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Determinant of a square matrix by partial-pivot elimination.
pub fn determinant(a: &LinearMap) -> f64 {
    assert!(a.is_square(), "determinant of a non-square matrix");
    let n = a.nrows();
    match n {
        0 => 1.0,
        1 => a[(0, 0)],
        2 => a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)],
        3 => {
            a[(0, 0)] * (a[(1, 1)] * a[(2, 2)] - a[(1, 2)] * a[(2, 1)])
                - a[(0, 1)] * (a[(1, 0)] * a[(2, 2)] - a[(1, 2)] * a[(2, 0)])
                + a[(0, 2)] * (a[(1, 0)] * a[(2, 1)] - a[(1, 1)] * a[(2, 0)])
        }
        _ => a.clone().lu().determinant(),
    }
}

/// The induced map ΛʳA : Λʳℝⁿ → Λʳℝᵐ, with entries the r×r minors of A.
pub fn exterior_power(a: &LinearMap, r: usize) -> Result<LinearMap> {
    let (m, n) = a.shape();
    let hi = m.min(n);
    if r == 0 || r > hi {
        return Err(XalgError::DegreeOutOfRange { r, lo: 1, hi });
    }
    let rows = subsets(m, r);
    let cols = subsets(n, r);
    let mut out = LinearMap::zeros(rows.len(), cols.len());
    let mut minor = LinearMap::zeros(r, r);
    for (ci, cset) in cols.iter().enumerate() {
        for (ri, rset) in rows.iter().enumerate() {
            for (p, &i) in rset.iter().enumerate() {
                for (q, &j) in cset.iter().enumerate() {
                    minor[(p, q)] = a[(i, j)];
                }
            }
            out[(ri, ci)] = determinant(&minor);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformalTest {
    pub is_conformal: bool,
    /// Always frobenius(A)/√n, n the domain dimension.
    pub lambda: f64,
    /// Set for the zero map, which is reported as non-conformal.
    pub degenerate: bool,
}

/// Decides whether AᵀA = λ²I within `tol` relative to ‖AᵀA‖.
pub fn conformal_test(a: &LinearMap, tol: f64) -> ConformalTest {
    let n = a.ncols();
    let norm = frobenius(a);
    let lambda = if n == 0 { 0.0 } else { norm / (n as f64).sqrt() };
    if norm == 0.0 {
        return ConformalTest { is_conformal: false, lambda: 0.0, degenerate: true };
    }
    let gram = a.transpose() * a;
    let shifted = &gram - LinearMap::identity(n, n) * (lambda * lambda);
    ConformalTest {
        is_conformal: frobenius(&shifted) <= tol * frobenius(&gram),
        lambda,
        degenerate: false,
    }
}

/// n⁻ʳC(n,r)|A|²ʳ − |ΛʳA|², n the domain dimension; nonnegative, and zero
/// exactly on conformal injections.
pub fn hadamard_gap(a: &LinearMap, r: usize) -> Result<f64> {
    let (m, n) = a.shape();
    if r < 2 || r > n {
        return Err(XalgError::DegreeOutOfRange { r, lo: 2, hi: n });
    }
    let nf = n as f64;
    let bound = binomial(n, r) as f64 * nf.powi(-(r as i32)) * frobenius(a).powi(2 * r as i32);
    let power = if r > m { 0.0 } else { frobenius(&exterior_power(a, r)?).powi(2) };
    Ok(bound - power)
}
