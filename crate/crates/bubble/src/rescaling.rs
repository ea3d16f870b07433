use fields::stereo::factor;
use fields::{precompose_conformal, ChartDomain, ConformalMap, Mat3, MapField, MetricField, Point};
use log::debug;
use rayon::prelude::*;

use crate::measure::{anchored_ball_energy, ball_energy, shell_energy};
use crate::{dist, BubbleConfig, BubbleError, Result, SphereRule};

/// Golden-section iterations per coordinate.
const GOLDEN_STEPS: usize = 40;
/// Center-refinement rounds alternating with the radius solve.
const ROUNDS: usize = 4;

/// One evaluated pair (center, radius) of the complement energy
/// E(u; D₄ ∖ B(center; radius)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanEntry {
    pub center: Point,
    pub radius: f64,
    pub complement: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RescalingRecord {
    /// Position in the ladder, starting at 1.
    pub k: usize,
    /// Sequence index n.
    pub index: usize,
    /// Concentration point the balls are centered at.
    pub point: Point,
    pub eps: f64,
    /// Radii of D₁ ⊂ D₂ ⊂ D₃ ⊂ D₄.
    pub radii: [f64; 4],
    pub center: Point,
    pub lambda: f64,
    /// Complement energy E(u; D₄ ∖ B(center; λ)).
    pub level: f64,
    /// E(u; D₄).
    pub outer_energy: f64,
    /// Lattice spacing over D₃.
    pub spacing: f64,
    pub scans: Vec<ScanEntry>,
}

impl RescalingRecord {
    pub fn level_defect(&self, eta0: f64) -> f64 {
        (self.level - eta0).abs()
    }

    pub fn center_in_d2(&self) -> bool {
        dist(self.center, self.point) < self.radii[1]
    }

    /// Largest undershoot of η₀ among scanned complements with r ≤ λ.
    pub fn scan_undershoot(&self, eta0: f64) -> f64 {
        self.scans
            .iter()
            .filter(|s| s.radius <= self.lambda * (1.0 + 1e-12))
            .map(|s| eta0 - s.complement)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Level equation within `solver_tol` and no scanned (x, r ≤ λ) below
    /// η₀ − `certify_tol`.
    pub fn certified(&self, eta0: f64, solver_tol: f64, certify_tol: f64) -> bool {
        self.level_defect(eta0) <= solver_tol && self.scan_undershoot(eta0) <= certify_tol
    }
}

/// Outer scale ε_k at a concentration point: a quarter of the isolation
/// radius, halved until the base-map energy in B(2ε) estimated from the
/// finest map is at most base_budget/k². The estimate is the mean density on
/// B(2ε) ∖ B(ε/2) times the volume of B(2ε).
pub fn outer_scale(u: &MapField, g: &MetricField, point: Point, isolation: f64, k: usize, config: &BubbleConfig) -> Result<f64> {
    let budget = config.base_budget / (k * k) as f64;
    let mut eps = 0.25 * isolation;
    for _ in 0..30 {
        let (inner, outer) = (0.5 * eps, 2.0 * eps);
        let shell = shell_energy(u, g, point, inner, outer, &config.fine)?;
        let estimate = shell * outer.powi(3) / (outer.powi(3) - inner.powi(3));
        if estimate <= budget {
            return Ok(eps);
        }
        eps *= 0.5;
    }
    Ok(eps)
}

struct Search<'a> {
    u: &'a MapField,
    g: &'a MetricField,
    point: Point,
    eps: f64,
    outer: f64,
    fine: SphereRule,
    scans: Vec<ScanEntry>,
}

impl Search<'_> {
    fn inside(&self, x: Point) -> bool {
        dist(x, self.point) <= self.eps * (1.0 + 1e-12)
    }

    fn ball(&mut self, x: Point, r: f64) -> Result<f64> {
        let e = anchored_ball_energy(self.u, self.g, self.point, x, r, &self.fine)?;
        self.scans.push(ScanEntry { center: x, radius: r, complement: self.outer - e });
        Ok(e)
    }

    fn lattice(&self, n: usize) -> (Vec<Point>, f64) {
        let h = 2.0 * self.eps / (n - 1) as f64;
        let mut pts = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let x = [i, j, k].map(|v| v as f64 * h - self.eps);
                    let x = [0, 1, 2].map(|a| self.point[a] + x[a]);
                    if self.inside(x) {
                        pts.push(x);
                    }
                }
            }
        }
        (pts, h)
    }

    /// Ball energies at every lattice point with radius r under `rule`.
    fn scan(&mut self, pts: &[Point], r: f64, rule: &SphereRule, record: bool) -> Result<Vec<f64>> {
        let vals = pts
            .par_iter()
            .map(|&x| anchored_ball_energy(self.u, self.g, self.point, x, r, rule))
            .collect::<Result<Vec<_>>>()?;
        if record {
            for (x, e) in pts.iter().zip(&vals) {
                self.scans.push(ScanEntry { center: *x, radius: r, complement: self.outer - e });
            }
        }
        Ok(vals)
    }

    /// Coordinate-wise golden-section ascent of E(B(x; r)) over
    /// |x_a − c_a| ≤ width, kept inside D₃.
    fn refine(&mut self, start: Point, r: f64, width: f64) -> Result<(Point, f64)> {
        let gr = 0.5 * (5f64.sqrt() - 1.0);
        let mut x = start;
        for _sweep in 0..2 {
            for a in 0..3 {
                let (mut lo, mut hi) = (x[a] - width, x[a] + width);
                let at = |x: Point, t: f64| {
                    let mut y = x;
                    y[a] = t;
                    y
                };
                let mut c = hi - gr * (hi - lo);
                let mut d = lo + gr * (hi - lo);
                let mut fc = self.value(at(x, c), r)?;
                let mut fd = self.value(at(x, d), r)?;
                for _ in 0..GOLDEN_STEPS {
                    if fc >= fd {
                        hi = d;
                        d = c;
                        fd = fc;
                        c = hi - gr * (hi - lo);
                        fc = self.value(at(x, c), r)?;
                    } else {
                        lo = c;
                        c = d;
                        fc = fd;
                        d = lo + gr * (hi - lo);
                        fd = self.value(at(x, d), r)?;
                    }
                }
                let candidate = at(x, 0.5 * (lo + hi));
                if self.inside(candidate) && self.value(candidate, r)? >= self.value(x, r)? {
                    x = candidate;
                }
            }
        }
        let best = self.value(x, r)?;
        Ok((x, best))
    }

    fn value(&mut self, x: Point, r: f64) -> Result<f64> {
        if !self.inside(x) {
            return Ok(f64::NEG_INFINITY);
        }
        self.ball(x, r)
    }

    /// Smallest r ∈ (0, hi] with E(D₄ ∖ B(c; r)) = η₀ for a fixed center.
    fn solve_radius(&mut self, c: Point, hi: f64, eta0: f64, tol: f64) -> Result<(f64, f64)> {
        let (mut a, mut b) = (0.0, hi);
        let mut fb = self.outer - self.ball(c, b)?;
        if fb > eta0 {
            return Ok((b, fb));
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            let fm = self.outer - self.ball(c, m)?;
            if fm > eta0 {
                a = m;
            } else {
                b = m;
                fb = fm;
            }
            if (fb - eta0).abs() <= 0.1 * tol || b - a <= 1e-15 * hi {
                break;
            }
        }
        Ok((b, fb))
    }
}

/// Selects the center c_k and dilation λ_k at index n (ladder position k)
/// for the concentration point `point` with outer scale `eps`.
///
/// The complement energy F(r) = inf_{x ∈ D̄₃} E(u; D₄ ∖ B(x; r)) is
/// minimized over a center lattice on D₃ (scanned with a coarse rule and
/// radius at least the lattice spacing), then refined by golden sections,
/// alternating with a bisection of F(r) = η₀ in r ≤ radius(D₁). The final
/// lattice is rescanned at r = λ with the fine rule to certify minimality.
pub fn choose_rescaling(
    u: &MapField,
    g: &MetricField,
    point: Point,
    eps: f64,
    k: usize,
    index: usize,
    config: &BubbleConfig,
) -> Result<RescalingRecord> {
    let kk = (k * k) as f64;
    let radii = [eps / (2.0 * kk), eps / kk, eps, 2.0 * eps];
    let outer = ball_energy(u, g, point, radii[3], &config.fine)?;
    if outer <= config.eta0 {
        return Err(BubbleError::NoConcentration { index, energy: outer, level: config.eta0 });
    }
    let mut s = Search { u, g, point, eps, outer, fine: config.fine, scans: Vec::new() };
    let (pts, spacing) = s.lattice(config.lattice);
    let r_hi = radii[0];
    let smooth = s.scan(&pts, r_hi.max(spacing), &config.coarse, false)?;
    let best = (0..pts.len()).max_by(|&a, &b| smooth[a].total_cmp(&smooth[b]).then(b.cmp(&a))).expect("lattice is nonempty");
    let anchor = pts[best];
    let (mut c, _) = s.refine(anchor, r_hi, spacing)?;
    let top = s.outer - s.ball(c, r_hi)?;
    if top > config.eta0 + config.solver_tol {
        return Err(BubbleError::LevelNotReached { index, value: top, level: config.eta0 });
    }
    let (mut lambda, mut level) = s.solve_radius(c, r_hi, config.eta0, config.solver_tol)?;
    for _ in 0..ROUNDS {
        let width = (4.0 * lambda).min(spacing);
        let (c2, _) = s.refine(c, lambda, width)?;
        let shift = dist(c2, c);
        c = c2;
        let (l2, f2) = s.solve_radius(c, r_hi, config.eta0, config.solver_tol)?;
        lambda = l2;
        level = f2;
        if shift <= 1e-9 * eps {
            break;
        }
    }
    let shift = dist(c, anchor);
    if shift > spacing * (1.0 + 1e-9) {
        return Err(BubbleError::CenterGridTooCoarse { index, shift, spacing });
    }
    s.scan(&pts, lambda, &config.fine, true)?;
    debug!("index {index}: eps {eps:e}, lambda {lambda:e}, center {c:?}, level {level:e}");
    Ok(RescalingRecord {
        k,
        index,
        point,
        eps,
        radii,
        center: c,
        lambda,
        level,
        outer_energy: outer,
        spacing,
        scans: s.scans,
    })
}

/// A rescaled map ũ(y) = u(c + λy) on a stereographic chart box, with the
/// metric h(y) = (2/(1+|y|²))²·g(c + λy)/det(g(c))^{1/3} and the chart image
/// Ω of D₄.
#[derive(Clone, Debug)]
pub struct RescaledMap {
    pub map: MapField,
    pub metric: MetricField,
    pub omega_center: Point,
    pub omega_radius: f64,
}

pub fn rescale(u: &MapField, g: &MetricField, rec: &RescalingRecord, config: &BubbleConfig) -> Result<RescaledMap> {
    let r = config.chart_extent;
    let (lo, hi) = (u.domain().lo(), u.domain().hi());
    for a in 0..3 {
        let (a0, a1) = (rec.center[a] - rec.lambda * r, rec.center[a] + rec.lambda * r);
        if a0 < lo[a] || a1 > hi[a] {
            return Err(BubbleError::ChartBounds(format!(
                "chart box of half-width {r} at scale {:e} leaves the domain along axis {a}",
                rec.lambda
            )));
        }
    }
    let domain = ChartDomain::stereo(-r, r, config.grid.max(ChartDomain::MIN_RESOLUTION))?;
    let map = precompose_conformal(u, &ConformalMap::similarity(rec.center, rec.lambda), domain)?;
    let (c, lambda) = (rec.center, rec.lambda);
    let norm = g.matrix(c).determinant().cbrt();
    let base = g.clone();
    let metric = MetricField::general(
        move |y: Point| {
            let x = [0, 1, 2].map(|a| c[a] + lambda * y[a]);
            base.matrix(x) * (factor(y).powi(2) / norm)
        },
        f64::INFINITY,
    );
    let omega_center = [0, 1, 2].map(|a| (rec.point[a] - c[a]) / lambda);
    Ok(RescaledMap { map, metric, omega_center, omega_radius: rec.radii[3] / lambda })
}

/// sup over a 9³ lattice of the closed unit chart ball of
/// ‖h(y) − (2/(1+|y|²))²·I‖_F.
pub fn round_metric_gap(metric: &MetricField) -> f64 {
    let mut gap: f64 = 0.0;
    for i in 0..9 {
        for j in 0..9 {
            for k in 0..9 {
                let y = [i, j, k].map(|v| v as f64 / 4.0 - 1.0);
                if y[0] * y[0] + y[1] * y[1] + y[2] * y[2] <= 1.0 {
                    gap = gap.max((metric.matrix(y) - Mat3::identity() * factor(y).powi(2)).norm());
                }
            }
        }
    }
    gap
}
