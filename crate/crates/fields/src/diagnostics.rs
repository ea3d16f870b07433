use rayon::prelude::*;
use vcp::Calibration;

use crate::pointwise;
use crate::quadrature::integrate;
use crate::{
    differential, ChartDomain, DifferentialSample, FieldError, Jacobian, MapField, MetricField, Point, QuadratureRule,
    Region, Result, Scheme, MAX_D, UNPREFACTORED,
};

/// One value per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub domain: ChartDomain,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Maximum over points at least `layers` nodes from every face.
    pub fn interior_max(&self, layers: usize) -> f64 {
        (0..self.values.len())
            .filter(|&i| self.domain.is_interior(i, layers))
            .map(|i| self.values[i])
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    /// Prefactored energy (1/(√3)³)∫|du|³ dvol_g.
    pub total: f64,
    pub rule: &'static str,
    pub nodes: usize,
}

impl EnergyReport {
    /// ∫|du|³ dvol_g without the prefactor.
    pub fn unprefactored(&self) -> f64 {
        self.total * UNPREFACTORED
    }
}

fn point_field(
    du: &DifferentialSample,
    g: &MetricField,
    f: impl Fn(&Jacobian, &crate::PointMetric) -> f64 + Sync,
) -> ScalarField {
    let domain = *du.domain();
    let values = (0..domain.len()).into_par_iter().map(|i| f(du.at(i), &g.at(domain.point(i)))).collect();
    ScalarField { domain, values }
}

/// du at every cell center: analytic evaluation, or the corner mean of the
/// grid differential.
fn cell_jacobians(u: &MapField, scheme: Scheme) -> Result<Vec<(Point, Jacobian)>> {
    let domain = *u.domain();
    match scheme {
        Scheme::Analytic => (0..domain.cell_count())
            .into_par_iter()
            .map(|c| {
                let x = domain.cell(c).1;
                u.jacobian_at(x).map(|du| (x, du))
            })
            .collect(),
        Scheme::Central2 => {
            let ds = differential(u, scheme)?;
            Ok((0..domain.cell_count()).into_par_iter().map(|c| (domain.cell(c).1, ds.cell_average(c))).collect())
        }
    }
}

fn cell_integral(cells: &[(Point, Jacobian)], domain: &ChartDomain, f: impl Fn(Point, &Jacobian) -> f64 + Sync) -> f64 {
    let terms: Vec<f64> = cells.par_iter().map(|(x, du)| f(*x, du)).collect();
    terms.iter().sum::<f64>() * domain.cell_volume()
}

pub fn smith_residual_field(u: &MapField, g: &MetricField, scheme: Scheme) -> Result<ScalarField> {
    let cross = u.target().require_cross()?;
    let du = differential(u, scheme)?;
    Ok(point_field(&du, g, |j, pm| pointwise::smith_residual(j, pm, cross)))
}

pub fn energy_density_field(u: &MapField, g: &MetricField, scheme: Scheme) -> Result<ScalarField> {
    let d = u.dim();
    let du = differential(u, scheme)?;
    Ok(point_field(&du, g, |j, pm| pointwise::energy_density(j, d, pm)))
}

/// Prefactored energy over a region, from pointwise Jacobians at the
/// quadrature nodes.
pub fn energy(u: &MapField, g: &MetricField, region: &Region, rule: &QuadratureRule) -> Result<EnergyReport> {
    let nodes = region.nodes(rule)?;
    let d = u.dim();
    let total = integrate(&nodes, |x| Ok(pointwise::energy_density(&u.jacobian_at(x)?, d, &g.at(x))))?;
    Ok(EnergyReport { total, rule: rule.tag(), nodes: nodes.len() })
}

/// Prefactored energy over the whole chart box, midpoint rule on grid cells.
pub fn energy_on_grid(u: &MapField, g: &MetricField, scheme: Scheme) -> Result<EnergyReport> {
    let d = u.dim();
    let cells = cell_jacobians(u, scheme)?;
    let total = cell_integral(&cells, u.domain(), |x, du| pointwise::energy_density(du, d, &g.at(x)));
    Ok(EnergyReport { total, rule: "midpoint", nodes: cells.len() })
}

/// Pointwise density (1/(√3)³)|du|³√g − (u*α)(∂₁, ∂₂, ∂₃) at grid points and
/// its midpoint integral over the chart box.
pub fn energy_identity_defect(u: &MapField, g: &MetricField, scheme: Scheme) -> Result<(ScalarField, f64)> {
    let target = u.target();
    target.require_cross()?;
    let du = differential(u, scheme)?;
    let field = point_field(&du, g, |j, pm| pointwise::energy_identity_density(j, pm, target));
    let cells = cell_jacobians(u, scheme)?;
    let total = cell_integral(&cells, u.domain(), |x, j| pointwise::energy_identity_density(j, &g.at(x), target));
    Ok((field, total))
}

/// (u*α)(∂₁, ∂₂, ∂₃) at grid points and its integral over the chart box.
pub fn pullback_form(u: &MapField, alpha: &Calibration, scheme: Scheme) -> Result<(ScalarField, f64)> {
    if alpha.degree() != 3 {
        return Err(FieldError::DegreeMismatch { expected: 3, got: alpha.degree() });
    }
    if alpha.dim() != u.dim() {
        return Err(FieldError::StructureMismatch(format!("form on R^{} for a map into R^{}", alpha.dim(), u.dim())));
    }
    let terms: Vec<([usize; 3], f64)> =
        alpha.nonzero_terms().into_iter().map(|(i, v)| ([i[0], i[1], i[2]], v)).collect();
    let du = differential(u, scheme)?;
    let domain = *u.domain();
    let values = du.all().par_iter().map(|j| pointwise::pullback_density(j, &terms)).collect();
    let cells = cell_jacobians(u, scheme)?;
    let total = cell_integral(&cells, &domain, |_, j| pointwise::pullback_density(j, &terms));
    Ok((ScalarField { domain, values }, total))
}

pub fn conformality_defect(u: &MapField, g: &MetricField, scheme: Scheme) -> Result<ScalarField> {
    let d = u.dim();
    let du = differential(u, scheme)?;
    Ok(point_field(&du, g, |j, pm| pointwise::conformality_defect(j, d, pm)))
}

/// |(1/√g) ∂_α(√g g^{αβ}|du|_g uⁱ_β)| at interior grid points by central
/// differences of the nodal flux; the outer layer of points is set to 0.
pub fn nharmonic_residual(u: &MapField, g: &MetricField, scheme: Scheme) -> Result<ScalarField> {
    let domain = *u.domain();
    let d = u.dim();
    let du = differential(u, scheme)?;
    let flux: Vec<Jacobian> = (0..domain.len())
        .into_par_iter()
        .map(|i| pointwise::harmonic_flux(du.at(i), d, &g.at(domain.point(i))))
        .collect();
    let h = domain.spacing();
    let values = (0..domain.len())
        .into_par_iter()
        .map(|idx| {
            if !domain.is_interior(idx, 1) {
                return 0.0;
            }
            let c = domain.coords(idx);
            let mut div = [0.0; MAX_D];
            for a in 0..3 {
                let (mut p, mut m) = (c, c);
                p[a] += 1;
                m[a] -= 1;
                let (fp, fm) = (&flux[domain.index(p[0], p[1], p[2])], &flux[domain.index(m[0], m[1], m[2])]);
                for i in 0..d {
                    div[i] += (fp[i][a] - fm[i][a]) / (2.0 * h[a]);
                }
            }
            let sqrt_det = g.at(domain.point(idx)).sqrt_det;
            let s: f64 = div[..d].iter().map(|x| x * x).sum();
            if sqrt_det > 0.0 {
                s.sqrt() / sqrt_det
            } else {
                s.sqrt()
            }
        })
        .collect();
    Ok(ScalarField { domain, values })
}
