use nalgebra::DMatrix;
use xalg::{exterior_power, frobenius, LinearMap, Multivector};

use crate::calibration::Calibration;
use crate::cross::CrossProduct;
use crate::{Result, VcpError};

/// Minimum Gram determinant of the normalized u-tuple.
pub const GRAM_TOL: f64 = 1e-8;

/// ‖P(u∧P(u∧w)) + |u|²·π_{U⊥}w‖ with u = u₁∧…∧u_{k−1} and U their span.
pub fn fundamental_identity_defect(p: &CrossProduct, us: &[&[f64]], w: &[f64]) -> Result<f64> {
    let n = p.dim();
    let k = p.fold();
    if us.len() + 1 != k || us.iter().any(|u| u.len() != n) || w.len() != n {
        return Err(VcpError::ArgumentMismatch {
            expected: k,
            n,
            got: format!("{} u-vectors and w of length {}", us.len(), w.len()),
        });
    }
    // independence check on unit-normalized inputs
    let normalized: Vec<Vec<f64>> = us.iter().map(|u| normalize(u)).collect();
    let gram = DMatrix::from_fn(us.len(), us.len(), |i, j| dot(&normalized[i], &normalized[j]));
    let gram_det = if us.is_empty() { 1.0 } else { gram.determinant() };
    if gram_det < GRAM_TOL {
        return Err(VcpError::DependentTuple(gram_det));
    }

    let with = |last: &[f64]| -> Result<Vec<f64>> {
        let mut args: Vec<&[f64]> = us.to_vec();
        args.push(last);
        p.apply(&args)
    };
    let inner = with(w)?;
    let outer = with(&inner)?;
    let u_sq = if us.is_empty() { 1.0 } else { Multivector::wedge_all(us)?.norm().powi(2) };

    // π_{U⊥}w by Gram–Schmidt on the u-tuple
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for u in &normalized {
        let mut v = u.clone();
        for _ in 0..2 {
            for b in &basis {
                let d = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
        basis.push(normalize(&v));
    }
    let mut perp = w.to_vec();
    for b in &basis {
        let d = dot(&perp, b);
        perp.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
    }
    Ok(outer.iter().zip(&perp).map(|(o, q)| (o + u_sq * q).powi(2)).sum::<f64>().sqrt())
}

/// 1 − α(frame) for an oriented orthonormal frame.
pub fn calibrated_defect(alpha: &Calibration, frame: &[&[f64]]) -> Result<f64> {
    let p = frame.len();
    if p != alpha.degree() || frame.iter().any(|v| v.len() != alpha.dim()) {
        return Err(VcpError::ArgumentMismatch {
            expected: alpha.degree(),
            n: alpha.dim(),
            got: format!("{} vectors", p),
        });
    }
    let mut dev: f64 = 0.0;
    for i in 0..p {
        for j in 0..p {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((dot(frame[i], frame[j]) - target).abs());
        }
    }
    if dev > 1e-10 {
        return Err(VcpError::NonOrthonormalFrame(dev));
    }
    Ok(1.0 - alpha.eval(frame)?)
}

fn check_folds(a: &LinearMap, p: &CrossProduct, q: &CrossProduct) -> Result<usize> {
    let (m, n) = a.shape();
    if p.dim() != n || q.dim() != m {
        return Err(VcpError::FoldMismatch(format!(
            "map is {m}x{n} but products act on R^{} and R^{}",
            p.dim(),
            q.dim()
        )));
    }
    if p.fold() + 1 != n || q.fold() + 1 != n {
        return Err(VcpError::FoldMismatch(format!(
            "need fold {} on both sides, got {} and {}",
            n - 1,
            p.fold(),
            q.fold()
        )));
    }
    Ok(n)
}

fn cross_residual(a: &LinearMap, p: &CrossProduct, q: &CrossProduct, scale: f64) -> Result<f64> {
    let n = check_folds(a, p, q)?;
    let k = n - 1;
    let lhs = q.table() * exterior_power(a, k)?;
    let rhs = a * p.table() * scale;
    Ok(frobenius(&(lhs - rhs)))
}

/// ‖Q∘Λⁿ⁻¹A − λⁿ⁻²·A∘P‖ over the C(n, n−1) basis, λ = |A|/√n.
pub fn smith_defect_linear(a: &LinearMap, p: &CrossProduct, q: &CrossProduct) -> Result<f64> {
    let n = a.ncols() as f64;
    let lambda = frobenius(a) / n.sqrt();
    cross_residual(a, p, q, lambda.powi(a.ncols() as i32 - 2))
}

/// ‖Q∘Λⁿ⁻¹A − A∘P‖: the cross-product preservation residual with unit scale.
pub fn gray_defect(a: &LinearMap, p: &CrossProduct, q: &CrossProduct) -> Result<f64> {
    cross_residual(a, p, q, 1.0)
}

/// (|A|/√n)ⁿ − α_Q(Au₁, …, Auₙ) for an oriented orthonormal frame (the
/// standard basis when `frame` is `None`).
pub fn generalized_calibration_gap(a: &LinearMap, q: &CrossProduct, frame: Option<&LinearMap>) -> Result<f64> {
    let (m, n) = a.shape();
    if q.dim() != m || q.fold() + 1 != n {
        return Err(VcpError::FoldMismatch(format!(
            "{m}x{n} map needs a fold-{} product on R^{m}, got fold {} on R^{}",
            n.saturating_sub(1),
            q.fold(),
            q.dim()
        )));
    }
    let identity = DMatrix::identity(n, n);
    let frame = frame.unwrap_or(&identity);
    let gram = frame.transpose() * frame;
    let dev = frobenius(&(gram - DMatrix::<f64>::identity(n, n)));
    if frame.shape() != (n, n) || dev > 1e-10 || frame.determinant() <= 0.0 {
        return Err(VcpError::NonOrthonormalFrame(dev));
    }
    let image = a * frame;
    let cols: Vec<Vec<f64>> = (0..n).map(|j| image.column(j).iter().copied().collect()).collect();
    let refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
    let pulled = q.calibration().eval(&refs)?;
    let nf = n as f64;
    Ok((frobenius(a) / nf.sqrt()).powi(n as i32) - pulled)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &[f64]) -> Vec<f64> {
    let n = dot(v, v).sqrt();
    if n == 0.0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / n).collect()
    }
}
