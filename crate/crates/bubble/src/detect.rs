use fields::{MapField, MetricField, Point};
use log::debug;

use crate::measure::{ball_energy, bare_density, energy_density, MeasureGrid};
use crate::{dist, BubbleConfig, BubbleError, MapSequence, Result};

/// A detected concentration point.
#[derive(Debug, Clone, PartialEq)]
pub struct Concentration {
    pub point: Point,
    /// Extrapolated mass, lim_{r→0} lim_{n→∞} E(u_n; B(point; r)).
    pub mass: f64,
    /// Scan radii, decreasing.
    pub radii: Vec<f64>,
    /// `ball_energies[i][j]` = E(u_{n_i}; B(point; r_j)).
    pub ball_energies: Vec<Vec<f64>>,
    /// Per-radius limits in n.
    pub limits: Vec<f64>,
}

impl Concentration {
    /// Ball energies at the smallest radius along the ladder.
    pub fn trend(&self) -> Vec<f64> {
        self.ball_energies.iter().map(|row| *row.last().unwrap_or(&0.0)).collect()
    }
}

/// Limit of a sequence sampled on a geometric ladder, from its last three
/// terms under a geometric tail; the last term when the tail is not
/// contracting.
pub fn richardson_sequence(values: &[f64]) -> f64 {
    let m = values.len();
    if m < 3 {
        return values.last().copied().unwrap_or(0.0);
    }
    let (a, b, c) = (values[m - 3], values[m - 2], values[m - 1]);
    let (d1, d2) = (b - a, c - b);
    if d1.abs() <= 1e-14 * c.abs().max(1.0) {
        return c;
    }
    let q = d2 / d1;
    if !(q > 0.0 && q < 0.9) {
        return c;
    }
    c + d2 * q / (1.0 - q)
}

/// Limit r → 0 of M(r) = M₀ + C·r³ from its values at the two smallest
/// radii of a halving ladder.
pub fn richardson_radius(values: &[f64]) -> f64 {
    match values {
        [] => 0.0,
        [v] => *v,
        [.., a, b] => (8.0 * b - a) / 7.0,
    }
}

/// Concentration points of a sequence: candidates are density maxima inside
/// the heaviest cells of the measure at the finest index, and a candidate is
/// kept when its extrapolated ball-energy mass is at least eps0/2.
pub fn detect_concentration(seq: &MapSequence, config: &BubbleConfig) -> Result<Vec<Concentration>> {
    Ok(detect_full(seq, config)?.found)
}

pub(crate) struct Detection {
    pub found: Vec<Concentration>,
    /// Bare energy of each map of the ladder.
    pub totals: Vec<f64>,
    /// Measure of the finest map.
    pub finest: MeasureGrid,
}

pub(crate) fn detect_full(seq: &MapSequence, config: &BubbleConfig) -> Result<Detection> {
    config.validate()?;
    let indices = seq.indices();
    if indices.len() < 4 {
        return Err(BubbleError::LadderTooShort { got: indices.len(), min: 4 });
    }
    let maps = indices.iter().map(|&n| seq.map(n)).collect::<Result<Vec<_>>>()?;
    let mut finest = None;
    let mut totals = Vec::new();
    for (&n, (u, g)) in indices.iter().zip(&maps) {
        let measure = energy_density(u, g, config.grid, config.octree_depth, config.octree_tol * seq.energy_bound())?;
        let total = measure.total();
        if total > seq.energy_bound() * (1.0 + config.quadrature_tol) {
            return Err(BubbleError::EnergyBound { index: n, energy: total, bound: seq.energy_bound() });
        }
        totals.push(total);
        finest = Some(measure);
    }
    let measure = finest.expect("ladder is nonempty");
    let (u, g) = maps.last().expect("ladder is nonempty");
    let candidates = candidates(u, g, &measure, config)?;
    let (lo, hi) = (seq.domain().lo(), seq.domain().hi());
    let mut found = Vec::new();
    for x in candidates {
        let wall = (0..3).map(|a| (x[a] - lo[a]).min(hi[a] - x[a])).fold(f64::INFINITY, f64::min);
        let top = config.scan_radius.min(wall);
        if !(top > 0.0) {
            continue;
        }
        let radii: Vec<f64> = (0..config.scan_levels).map(|j| top * 0.5f64.powi(j as i32)).collect();
        let ball_energies = maps
            .iter()
            .map(|(u, g)| radii.iter().map(|&r| ball_energy(u, g, x, r, &config.fine)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let limits: Vec<f64> = (0..radii.len())
            .map(|j| richardson_sequence(&ball_energies.iter().map(|row| row[j]).collect::<Vec<_>>()))
            .collect();
        let mass = richardson_radius(&limits);
        debug!("{}: candidate {x:?} mass {mass:e}", seq.name());
        if mass >= 0.5 * config.eps0 {
            found.push(Concentration { point: x, mass, radii, ball_energies, limits });
        }
    }
    Ok(Detection { found, totals, finest: measure })
}

/// Density maxima started from the heaviest cells, each suppressing the
/// cells within the scan radius.
fn candidates(u: &MapField, g: &MetricField, measure: &MeasureGrid, config: &BubbleConfig) -> Result<Vec<Point>> {
    let floor = config.eps0 / 16.0;
    let mut order: Vec<usize> = (0..measure.masses.len()).filter(|&c| measure.masses[c] >= floor).collect();
    order.sort_by(|&a, &b| measure.masses[b].total_cmp(&measure.masses[a]).then(a.cmp(&b)));
    let h = measure.cell_size();
    let mut out: Vec<Point> = Vec::new();
    for c in order {
        if out.len() == config.candidates {
            break;
        }
        let start = measure.center(c);
        if out.iter().any(|p| dist(*p, start) <= config.scan_radius) {
            continue;
        }
        let x = density_peak(u, g, start, h)?;
        if out.iter().any(|p| dist(*p, x) <= config.scan_radius) {
            continue;
        }
        out.push(x);
    }
    Ok(out)
}

/// Compass search for a maximum of |du|³√g within 1.5 cells of `start`.
fn density_peak(u: &MapField, g: &MetricField, start: Point, h: Point) -> Result<Point> {
    let mut x = start;
    let mut best = bare_density(u, g, x)?;
    let mut step = h.map(|v| 0.5 * v);
    let lo = [0, 1, 2].map(|a| start[a] - 1.5 * h[a]);
    let hi = [0, 1, 2].map(|a| start[a] + 1.5 * h[a]);
    for _ in 0..400 {
        let mut moved = false;
        for a in 0..3 {
            for sgn in [1.0, -1.0] {
                let mut y = x;
                y[a] = (y[a] + sgn * step[a]).clamp(lo[a], hi[a]);
                let v = bare_density(u, g, y)?;
                if v > best {
                    best = v;
                    x = y;
                    moved = true;
                }
            }
        }
        if !moved {
            step = step.map(|s| 0.5 * s);
            if step[0] < 1e-11 * h[0] {
                break;
            }
        }
    }
    Ok(x)
}
