use rayon::prelude::*;

use crate::{ChartDomain, FieldError, Jacobian, MapField, MetricField, Result, Value, MAX_D};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Second-order central differences, one-sided second order at faces.
    Central2,
    /// The field's own Jacobian (pointwise differences when none is attached).
    Analytic,
}

/// du at every grid point.
#[derive(Debug, Clone)]
pub struct DifferentialSample {
    domain: ChartDomain,
    d: usize,
    du: Vec<Jacobian>,
}

impl DifferentialSample {
    pub fn domain(&self) -> &ChartDomain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn at(&self, idx: usize) -> &Jacobian {
        &self.du[idx]
    }

    pub fn all(&self) -> &[Jacobian] {
        &self.du
    }

    /// |du|_g at grid point `idx`.
    pub fn norm(&self, idx: usize, g: &MetricField) -> f64 {
        let pm = g.at(self.domain.point(idx));
        crate::pointwise::norm_sq(&self.du[idx], self.d, &pm).sqrt()
    }

    /// λ(du) = |du|_g/√3.
    pub fn lambda(&self, idx: usize, g: &MetricField) -> f64 {
        self.norm(idx, g) / 3f64.sqrt()
    }

    /// du at the center of cell `c`, the mean of its eight corners.
    pub fn cell_average(&self, c: usize) -> Jacobian {
        let (corners, _) = self.domain.cell(c);
        let mut out = [[0.0; 3]; MAX_D];
        for &k in &corners {
            for (o, row) in out.iter_mut().zip(&self.du[k]).take(self.d) {
                for a in 0..3 {
                    o[a] += 0.125 * row[a];
                }
            }
        }
        out
    }
}

pub fn differential(u: &MapField, scheme: Scheme) -> Result<DifferentialSample> {
    let domain = *u.domain();
    let d = u.dim();
    let du = match scheme {
        Scheme::Analytic => {
            if !u.is_analytic() {
                return Err(FieldError::SchemeUnavailable("sampled fields need Central2".into()));
            }
            (0..domain.len())
                .into_par_iter()
                .map(|i| u.jacobian_at(domain.point(i)))
                .collect::<Result<Vec<_>>>()?
        }
        Scheme::Central2 => {
            let values = u.grid_values();
            (0..domain.len()).into_par_iter().map(|i| central2(u, &values, i)).collect()
        }
    };
    Ok(DifferentialSample { domain, d, du })
}

fn central2(u: &MapField, values: &[Value], idx: usize) -> Jacobian {
    let domain = u.domain();
    let target = u.target();
    let n = domain.resolution();
    let h = domain.spacing();
    let c = domain.coords(idx);
    let mut du = [[0.0; 3]; MAX_D];
    for a in 0..3 {
        let at = |offset: isize| {
            let mut cc = c;
            cc[a] = (c[a] as isize + offset) as usize;
            &values[domain.index(cc[0], cc[1], cc[2])]
        };
        let here = &values[idx];
        for (i, row) in du.iter_mut().enumerate().take(u.dim()) {
            row[a] = if c[a] == 0 {
                let (d1, d2) = (target.difference(at(1), here, i), target.difference(at(2), here, i));
                (4.0 * d1 - d2) / (2.0 * h[a])
            } else if c[a] == n - 1 {
                let (d1, d2) = (target.difference(here, at(-1), i), target.difference(here, at(-2), i));
                (4.0 * d1 - d2) / (2.0 * h[a])
            } else {
                target.difference(at(1), at(-1), i) / (2.0 * h[a])
            };
        }
    }
    du
}
