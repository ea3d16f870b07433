use std::f64::consts::PI;

use vcp::{Calibration, CrossProduct, VcpKind};

use crate::{FieldError, Result, Value, MAX_D};

/// Flat ℝᵈ with an optional 2-fold cross product, its calibration 3-form,
/// and a mask of coordinates read modulo 2π.
#[derive(Debug, Clone)]
pub struct TargetStructure {
    d: usize,
    cross: Option<CrossProduct>,
    form: Option<Calibration>,
    /// Nonzero components (a < b < c, value) of the 3-form.
    terms: Vec<([usize; 3], f64)>,
    periodic: [bool; MAX_D],
}

impl TargetStructure {
    /// Builds a target from a cross product, validating its axioms.
    pub fn new(cross: CrossProduct) -> Result<Self> {
        let d = cross.dim();
        if d > MAX_D || cross.fold() != 2 {
            return Err(FieldError::StructureMismatch(format!(
                "need a 2-fold product on R^d with d <= {MAX_D}, got fold {} on R^{d}",
                cross.fold()
            )));
        }
        let defect = cross.axiom_defect(256, 0);
        if defect.orth.max(defect.metric) > 1e-10 {
            return Err(FieldError::StructureMismatch(format!("cross product fails its axioms: {defect:?}")));
        }
        let form = cross.calibration();
        let terms = form
            .nonzero_terms()
            .into_iter()
            .map(|(idx, v)| ([idx[0], idx[1], idx[2]], v))
            .collect();
        Ok(Self { d, cross: Some(cross), form: Some(form), terms, periodic: [false; MAX_D] })
    }

    /// ℝ⁷ with the associative cross product.
    pub fn associative() -> Self {
        Self::new(CrossProduct::builtin(VcpKind::G2, 7).expect("builtin")).expect("builtin passes axioms")
    }

    /// ℝ³ with the ordinary cross product.
    pub fn hodge3() -> Self {
        Self::new(CrossProduct::builtin(VcpKind::HodgeStar, 3).expect("builtin")).expect("builtin passes axioms")
    }

    /// S¹ × ℂ³ with coordinates (θ, Re z₁, Im z₁, …, Im z₃), θ periodic.
    /// The associative form then splits as dθ ∧ ω + Re(dz₁ ∧ dz₂ ∧ dz₃).
    pub fn product_lift() -> Self {
        let mut t = Self::associative();
        t.periodic[0] = true;
        t
    }

    /// Plain ℝᵈ without a cross product.
    pub fn euclidean(d: usize) -> Result<Self> {
        if d == 0 || d > MAX_D {
            return Err(FieldError::StructureMismatch(format!("target dimension {d}")));
        }
        Ok(Self { d, cross: None, form: None, terms: Vec::new(), periodic: [false; MAX_D] })
    }

    pub fn with_periodic(mut self, coordinate: usize) -> Result<Self> {
        if coordinate >= self.d {
            return Err(FieldError::StructureMismatch(format!("no coordinate {coordinate} on R^{}", self.d)));
        }
        self.periodic[coordinate] = true;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn cross(&self) -> Option<&CrossProduct> {
        self.cross.as_ref()
    }

    pub fn form(&self) -> Option<&Calibration> {
        self.form.as_ref()
    }

    pub(crate) fn form_terms(&self) -> &[([usize; 3], f64)] {
        &self.terms
    }

    pub fn is_periodic(&self, i: usize) -> bool {
        self.periodic[i]
    }

    pub fn has_periodic(&self) -> bool {
        self.periodic.iter().any(|&p| p)
    }

    /// Reduces periodic coordinates into [0, 2π).
    pub fn reduce(&self, mut v: Value) -> Value {
        for i in 0..self.d {
            if self.periodic[i] {
                v[i] = v[i].rem_euclid(2.0 * PI);
            }
        }
        v
    }

    /// a − b, with periodic components wrapped into (−π, π].
    pub fn difference(&self, a: &Value, b: &Value, i: usize) -> f64 {
        let diff = a[i] - b[i];
        if self.periodic[i] {
            wrap(diff)
        } else {
            diff
        }
    }

    /// Requires a cross product on ℝ⁷ or ℝ³ (domain dimension 3).
    pub(crate) fn require_cross(&self) -> Result<&CrossProduct> {
        self.cross
            .as_ref()
            .ok_or_else(|| FieldError::StructureMismatch(format!("target R^{} carries no cross product", self.d)))
    }
}

pub(crate) fn wrap(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lift_target_splits_the_form() {
        let t = TargetStructure::product_lift();
        let form = t.form().unwrap();
        // dθ ∧ ω with ω = e₁₂ + e₃₄ + e₅₆
        assert_eq!(form.component(&[0, 1, 2]), 1.0);
        assert_eq!(form.component(&[0, 3, 4]), 1.0);
        assert_eq!(form.component(&[0, 5, 6]), 1.0);
        // Re(dz₁ ∧ dz₂ ∧ dz₃) with zⱼ = x_{2j−1} + i x_{2j}
        assert_eq!(form.component(&[1, 3, 5]), 1.0);
        assert_eq!(form.component(&[1, 4, 6]), -1.0);
        assert_eq!(form.component(&[2, 3, 6]), -1.0);
        assert_eq!(form.component(&[2, 4, 5]), -1.0);
        assert!(t.is_periodic(0) && !t.is_periodic(1));
    }

    #[test]
    fn wrapping() {
        assert!((wrap(2.0 * PI - 0.1) + 0.1).abs() < 1e-15);
        assert_eq!(wrap(PI), PI);
        let t = TargetStructure::product_lift();
        let mut a = [0.0; MAX_D];
        a[0] = 7.0;
        assert!((t.reduce(a)[0] - (7.0 - 2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_structures() {
        assert!(TargetStructure::new(CrossProduct::builtin(VcpKind::Spin7, 8).unwrap()).is_err());
        assert!(TargetStructure::euclidean(9).is_err());
    }
}
