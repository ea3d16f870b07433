use fields::pointwise::bare_energy_density;
use fields::{energy, sphere_nodes, MapField, MetricField, Point, Region, UNPREFACTORED};
use rayon::prelude::*;

use crate::{Result, SphereRule};

/// Relative agreement between a cell estimate and its eight children below
/// which the octree stops refining.
const OCTREE_REL: f64 = 1e-3;

/// Bare energy per cell of a uniform grid over a chart box.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureGrid {
    pub lo: Point,
    pub hi: Point,
    pub cells: usize,
    pub masses: Vec<f64>,
}

impl MeasureGrid {
    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn cell_size(&self) -> Point {
        [0, 1, 2].map(|a| (self.hi[a] - self.lo[a]) / self.cells as f64)
    }

    pub fn coords(&self, c: usize) -> [usize; 3] {
        let n = self.cells;
        [c / (n * n), (c / n) % n, c % n]
    }

    pub fn center(&self, c: usize) -> Point {
        let h = self.cell_size();
        let ijk = self.coords(c);
        [0, 1, 2].map(|a| self.lo[a] + (ijk[a] as f64 + 0.5) * h[a])
    }

    /// Mass of the cells whose centers satisfy `keep`.
    pub fn mass_where(&self, keep: impl Fn(Point) -> bool) -> f64 {
        (0..self.masses.len()).filter(|&c| keep(self.center(c))).map(|c| self.masses[c]).sum()
    }
}

/// |du|³√g at a point.
pub fn bare_density(u: &MapField, g: &MetricField, x: Point) -> Result<f64> {
    Ok(bare_energy_density(&u.jacobian_at(x)?, u.dim(), &g.at(x)))
}

/// Cell masses of |du|³√g dx on `cells`³ cells of the chart box of `u`. Each
/// cell is refined as an octree until the midpoint estimate agrees with the
/// sum over its children to `abs_tol` or 1e-3 relative.
pub fn energy_density(u: &MapField, g: &MetricField, cells: usize, depth: usize, abs_tol: f64) -> Result<MeasureGrid> {
    let (lo, hi) = (u.domain().lo(), u.domain().hi());
    let h = [0, 1, 2].map(|a| (hi[a] - lo[a]) / cells as f64);
    let masses = (0..cells.pow(3))
        .into_par_iter()
        .map(|c| {
            let ijk = [c / (cells * cells), (c / cells) % cells, c % cells];
            let corner = [0, 1, 2].map(|a| lo[a] + ijk[a] as f64 * h[a]);
            let mid = [0, 1, 2].map(|a| corner[a] + 0.5 * h[a]);
            let coarse = h[0] * h[1] * h[2] * bare_density(u, g, mid)?;
            refine(u, g, corner, h, coarse, depth, abs_tol)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MeasureGrid { lo, hi, cells, masses })
}

fn refine(u: &MapField, g: &MetricField, corner: Point, h: Point, coarse: f64, depth: usize, tol: f64) -> Result<f64> {
    let half = h.map(|v| 0.5 * v);
    let vol = half[0] * half[1] * half[2];
    let mut children = [([0.0; 3], 0.0); 8];
    for (o, child) in children.iter_mut().enumerate() {
        let c = [0, 1, 2].map(|a| corner[a] + ((o >> (2 - a)) & 1) as f64 * half[a]);
        let mid = [0, 1, 2].map(|a| c[a] + 0.5 * half[a]);
        *child = (c, vol * bare_density(u, g, mid)?);
    }
    let fine: f64 = children.iter().map(|c| c.1).sum();
    if depth == 0 || (fine - coarse).abs() <= tol.max(OCTREE_REL * fine) {
        return Ok(fine);
    }
    children.iter().map(|&(c, m)| refine(u, g, c, half, m, depth - 1, tol)).sum()
}

/// Bare energy of B(center; radius).
pub fn ball_energy(u: &MapField, g: &MetricField, center: Point, radius: f64, rule: &SphereRule) -> Result<f64> {
    Ok(UNPREFACTORED * energy(u, g, &Region::Ball { center, radius }, &rule.rule())?.total)
}

/// Bare energy of B(center; radius) integrated along rays from `anchor`:
/// for each direction ω of the sphere mesh the radial integral runs over
/// [0, t*(ω)], with t* the exit distance, under the graded radial rule. This
/// resolves densities concentrated at the anchor when the ball is not
/// centered there. Falls back to [`ball_energy`] when the anchor is outside
/// the ball.
pub fn anchored_ball_energy(
    u: &MapField,
    g: &MetricField,
    anchor: Point,
    center: Point,
    radius: f64,
    rule: &SphereRule,
) -> Result<f64> {
    let d = [0, 1, 2].map(|a| anchor[a] - center[a]);
    let dd = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    if dd >= radius * radius {
        return ball_energy(u, g, center, radius, rule);
    }
    let dim = u.dim();
    let p = rule.grading;
    let ds = 1.0 / rule.radial as f64;
    let rays = sphere_nodes([0.0; 3], 1.0, rule.polar, rule.azimuthal);
    let terms = rays
        .par_iter()
        .map(|ray| {
            let w = ray.normal;
            let b = d[0] * w[0] + d[1] * w[1] + d[2] * w[2];
            let exit = -b + (b * b - dd + radius * radius).sqrt();
            let mut sum = 0.0;
            for i in 0..rule.radial {
                let s = (i as f64 + 0.5) * ds;
                let t = exit * s.powf(p);
                let dt = exit * p * s.powf(p - 1.0) * ds;
                let x = [0, 1, 2].map(|a| anchor[a] + t * w[a]);
                sum += bare_energy_density(&u.jacobian_at(x)?, dim, &g.at(x)) * t * t * dt;
            }
            Ok(ray.weight * sum)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(terms.iter().sum())
}

/// Bare energy of B(center; outer) ∖ B(center; inner).
pub fn shell_energy(u: &MapField, g: &MetricField, center: Point, inner: f64, outer: f64, rule: &SphereRule) -> Result<f64> {
    Ok(UNPREFACTORED * energy(u, g, &Region::Shell { center, inner, outer }, &rule.rule())?.total)
}
