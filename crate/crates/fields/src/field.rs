use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::{ChartDomain, FieldError, Jacobian, Point, Result, TargetStructure, Value, MAX_D};

pub type Evaluator = Arc<dyn Fn(Point) -> Value + Send + Sync>;
pub type JacobianFn = Arc<dyn Fn(Point) -> Jacobian + Send + Sync>;

/// Step of the pointwise central difference used when an analytic field has
/// no Jacobian.
pub const FD_STEP: f64 = 1e-5;

#[derive(Clone)]
enum Mode {
    Analytic { eval: Evaluator, jac: Option<JacobianFn> },
    /// n³·d values, point-major.
    Sampled { values: Arc<Vec<f64>> },
}

#[derive(Clone)]
pub struct MapField {
    domain: ChartDomain,
    target: TargetStructure,
    mode: Mode,
}

impl MapField {
    pub fn analytic(
        domain: ChartDomain,
        target: TargetStructure,
        eval: impl Fn(Point) -> Value + Send + Sync + 'static,
    ) -> Self {
        Self { domain, target, mode: Mode::Analytic { eval: Arc::new(eval), jac: None } }
    }

    pub fn from_parts(domain: ChartDomain, target: TargetStructure, eval: Evaluator, jac: Option<JacobianFn>) -> Self {
        Self { domain, target, mode: Mode::Analytic { eval, jac } }
    }

    /// Attaches an analytic Jacobian; no effect on sampled fields.
    pub fn with_jacobian(mut self, jac: impl Fn(Point) -> Jacobian + Send + Sync + 'static) -> Self {
        if let Mode::Analytic { jac: slot, .. } = &mut self.mode {
            *slot = Some(Arc::new(jac));
        }
        self
    }

    pub fn sampled(domain: ChartDomain, target: TargetStructure, values: Vec<f64>) -> Result<Self> {
        let expected = domain.len() * target.dim();
        if values.len() != expected {
            return Err(FieldError::StructureMismatch(format!(
                "{} samples for {} points of dimension {}",
                values.len(),
                domain.len(),
                target.dim()
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(FieldError::StructureMismatch(format!("non-finite sample at offset {bad}")));
        }
        let mut values = values;
        if target.has_periodic() {
            let d = target.dim();
            for chunk in values.chunks_mut(d) {
                let mut v = [0.0; MAX_D];
                v[..d].copy_from_slice(chunk);
                chunk.copy_from_slice(&target.reduce(v)[..d]);
            }
        }
        Ok(Self { domain, target, mode: Mode::Sampled { values: Arc::new(values) } })
    }

    pub fn domain(&self) -> &ChartDomain {
        &self.domain
    }

    pub fn target(&self) -> &TargetStructure {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.target.dim()
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self.mode, Mode::Analytic { .. })
    }

    pub fn has_jacobian(&self) -> bool {
        matches!(self.mode, Mode::Analytic { jac: Some(_), .. })
    }

    /// Same map on another chart domain (e.g. a different resolution).
    pub fn on_domain(&self, domain: ChartDomain) -> Result<Self> {
        match &self.mode {
            Mode::Analytic { .. } => Ok(Self { domain, target: self.target.clone(), mode: self.mode.clone() }),
            Mode::Sampled { .. } => Err(FieldError::SampledEvaluation),
        }
    }

    pub(crate) fn parts(&self) -> Option<(Evaluator, Option<JacobianFn>)> {
        match &self.mode {
            Mode::Analytic { eval, jac } => Some((eval.clone(), jac.clone())),
            Mode::Sampled { .. } => None,
        }
    }

    /// u(x), periodic coordinates reduced.
    pub fn value_at(&self, x: Point) -> Result<Value> {
        match &self.mode {
            Mode::Analytic { eval, .. } => Ok(self.target.reduce(eval(x))),
            Mode::Sampled { .. } => Err(FieldError::SampledEvaluation),
        }
    }

    /// du(x): the analytic Jacobian when present, else a central difference
    /// with step [`FD_STEP`].
    pub fn jacobian_at(&self, x: Point) -> Result<Jacobian> {
        match &self.mode {
            Mode::Analytic { jac: Some(j), .. } => Ok(j(x)),
            Mode::Analytic { eval, jac: None } => {
                let mut du = [[0.0; 3]; MAX_D];
                for a in 0..3 {
                    let (mut xp, mut xm) = (x, x);
                    xp[a] += FD_STEP;
                    xm[a] -= FD_STEP;
                    let (up, um) = (eval(xp), eval(xm));
                    for (i, row) in du.iter_mut().enumerate().take(self.dim()) {
                        row[a] = self.target.difference(&up, &um, i) / (2.0 * FD_STEP);
                    }
                }
                Ok(du)
            }
            Mode::Sampled { .. } => Err(FieldError::SampledEvaluation),
        }
    }

    /// Value at grid point `idx`.
    pub fn grid_value(&self, idx: usize) -> Value {
        match &self.mode {
            Mode::Analytic { eval, .. } => self.target.reduce(eval(self.domain.point(idx))),
            Mode::Sampled { values } => {
                let d = self.dim();
                let mut v = [0.0; MAX_D];
                v[..d].copy_from_slice(&values[idx * d..(idx + 1) * d]);
                v
            }
        }
    }

    pub fn grid_values(&self) -> Vec<Value> {
        (0..self.domain.len()).into_par_iter().map(|i| self.grid_value(i)).collect()
    }

    /// Samples the field onto its grid.
    pub fn to_sampled(&self) -> Self {
        let d = self.dim();
        let flat = self.grid_values().iter().flat_map(|v| v[..d].to_vec()).collect();
        Self { domain: self.domain, target: self.target.clone(), mode: Mode::Sampled { values: Arc::new(flat) } }
    }

    pub fn samples(&self) -> Option<&[f64]> {
        match &self.mode {
            Mode::Sampled { values } => Some(values),
            Mode::Analytic { .. } => None,
        }
    }
}

impl fmt::Debug for MapField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match &self.mode {
            Mode::Analytic { jac, .. } => {
                if jac.is_some() {
                    "analytic+jacobian"
                } else {
                    "analytic"
                }
            }
            Mode::Sampled { .. } => "sampled",
        };
        f.debug_struct("MapField")
            .field("domain", &self.domain)
            .field("d", &self.dim())
            .field("mode", &mode)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic() -> MapField {
        let domain = ChartDomain::cube(0.0, 1.0, 6).unwrap();
        MapField::analytic(domain, TargetStructure::euclidean(2).unwrap(), |x| {
            let mut v = [0.0; MAX_D];
            v[0] = x[0] * x[1];
            v[1] = x[2] * x[2];
            v
        })
    }

    #[test]
    fn pointwise_difference_matches_derivative() {
        let u = quadratic();
        let du = u.jacobian_at([0.3, 0.7, 0.2]).unwrap();
        assert!((du[0][0] - 0.7).abs() < 1e-9);
        assert!((du[0][1] - 0.3).abs() < 1e-9);
        assert!((du[1][2] - 0.4).abs() < 1e-9);
    }

    #[test]
    fn sampling_preserves_grid_values() {
        let u = quadratic();
        let s = u.to_sampled();
        assert!(!s.is_analytic());
        assert_eq!(s.grid_value(17), u.grid_value(17));
        assert!(matches!(s.value_at([0.0; 3]), Err(FieldError::SampledEvaluation)));
        assert!(MapField::sampled(*u.domain(), u.target().clone(), vec![0.0; 3]).is_err());
    }

    #[test]
    fn periodic_samples_are_reduced() {
        let domain = ChartDomain::cube(0.0, 1.0, 5).unwrap();
        let target = TargetStructure::euclidean(1).unwrap().with_periodic(0).unwrap();
        let u = MapField::sampled(domain, target, vec![-1.0; 125]).unwrap();
        assert!((u.grid_value(0)[0] - (2.0 * std::f64::consts::PI - 1.0)).abs() < 1e-15);
    }
}
