use fields::pointwise::norm_sq;
use fields::{MapField, MetricField, Point};
use log::{info, warn};
use rayon::prelude::*;

use crate::detect::{detect_full, richardson_radius, richardson_sequence, Concentration};
use crate::measure::ball_energy;
use crate::rescaling::{choose_rescaling, outer_scale, rescale, RescaledMap, RescalingRecord};
use crate::{dist, BubbleConfig, BubbleError, MapSequence, Result};

/// Node of a bubble tree. The root carries the base map; every other node
/// carries a bubble extracted at a concentration point of its parent.
#[derive(Debug, Clone)]
pub struct BubbleNode {
    /// 0 at the root.
    pub level: usize,
    /// Concentration point in the parent chart; `None` at the root.
    pub point: Option<Point>,
    /// Concentrated mass m_I; at the root, lim E(u_n).
    pub mass: f64,
    /// Bubble energy E(ũ_{∞,I}); at the root, the base energy E(u_∞).
    pub energy: f64,
    pub records: Vec<RescalingRecord>,
    /// E(ũ_k; Ω_k) for each record.
    pub chart_energies: Vec<f64>,
    /// Ladder indices skipped, with the reason.
    pub dropped: Vec<(usize, String)>,
    /// Maps on this node's chart: the input sequence at the root, the
    /// rescaled maps below it.
    pub sequence: MapSequence,
    /// Whether concentration was searched for on this node's chart.
    pub searched: bool,
    pub children: Vec<BubbleNode>,
}

impl BubbleNode {
    pub fn depth(&self) -> usize {
        self.children.iter().map(|c| 1 + c.depth()).max().unwrap_or(0)
    }

    /// All nodes below this one, depth first.
    pub fn descendants(&self) -> Vec<&BubbleNode> {
        let mut out = Vec::new();
        for c in &self.children {
            out.push(c);
            out.extend(c.descendants());
        }
        out
    }

    pub fn children_mass(&self) -> f64 {
        self.children.iter().map(|c| c.mass).sum()
    }
}

/// Assertable invariants of a built tree.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeAudit {
    /// Every mass ≥ eps0/2.
    pub mass_lower_bound: bool,
    /// Every child mass ≤ parent mass − eta0/2 + tol.
    pub level_decrement: bool,
    pub depth: usize,
    /// ceil(2(largest first-level mass − eps0/2)/eta0).
    pub depth_bound: usize,
    /// Every record meets the level equation and its scans are certified.
    pub level_sets: bool,
    /// Largest |E(ũ_k; Ω_k) − E(u_k; D₄)|/E(u_k; D₄).
    pub ledger_defect: f64,
    pub conformal_ledger: bool,
    /// Children of first-level bubbles lie in the closed unit chart ball.
    pub localization: bool,
    /// Bubbles below eps0 are constant to gap_tol.
    pub energy_gap: bool,
    /// Concentration remained at the maximum depth.
    pub truncated: bool,
}

impl TreeAudit {
    pub fn passed(&self) -> bool {
        self.mass_lower_bound
            && self.level_decrement
            && self.depth <= self.depth_bound
            && self.level_sets
            && self.conformal_ledger
            && self.localization
            && self.energy_gap
            && !self.truncated
    }
}

#[derive(Debug, Clone)]
pub struct BubbleTree {
    pub root: BubbleNode,
    /// Bare energy of each map of the input ladder.
    pub totals: Vec<f64>,
    pub audit: TreeAudit,
}

impl BubbleTree {
    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn nodes(&self) -> Vec<&BubbleNode> {
        let mut out = vec![&self.root];
        out.extend(self.root.descendants());
        out
    }
}

/// Detects, rescales and recurses until no concentration remains or
/// `config.max_depth` levels exist below the root.
pub fn build_tree(seq: &MapSequence, config: &BubbleConfig) -> Result<BubbleTree> {
    let detection = detect_full(seq, config)?;
    let mut truncated = false;
    let children = expand(seq, config, 1, detection.found, &mut truncated)?;
    let radii: Vec<(Point, f64)> = children
        .iter()
        .filter_map(|c| Some((c.point?, c.records.last()?.eps)))
        .collect();
    let base = detection.finest.mass_where(|x| radii.iter().all(|&(p, e)| dist(x, p) > e));
    let root = BubbleNode {
        level: 0,
        point: None,
        mass: richardson_sequence(&detection.totals),
        energy: base,
        records: Vec::new(),
        chart_energies: Vec::new(),
        dropped: Vec::new(),
        sequence: seq.clone(),
        searched: true,
        children,
    };
    let audit = audit(&root, config, truncated)?;
    info!("{}: depth {}, audit passed: {}", seq.name(), root.depth(), audit.passed());
    Ok(BubbleTree { root, totals: detection.totals, audit })
}

fn isolation(seq: &MapSequence, found: &[Concentration], i: usize) -> f64 {
    let x = found[i].point;
    let (lo, hi) = (seq.domain().lo(), seq.domain().hi());
    let wall = (0..3).map(|a| (x[a] - lo[a]).min(hi[a] - x[a])).fold(f64::INFINITY, f64::min);
    found
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, c)| 0.5 * dist(c.point, x))
        .fold(wall, f64::min)
}

fn expand(
    seq: &MapSequence,
    config: &BubbleConfig,
    level: usize,
    found: Vec<Concentration>,
    truncated: &mut bool,
) -> Result<Vec<BubbleNode>> {
    let indices = seq.indices().to_vec();
    let maps = indices.iter().map(|&n| seq.map(n)).collect::<Result<Vec<_>>>()?;
    let (uf, gf) = maps.last().expect("ladder is nonempty");
    let mut nodes = Vec::new();
    for (i, conc) in found.iter().enumerate() {
        let iso = isolation(seq, &found, i);
        let mut records: Vec<RescalingRecord> = Vec::new();
        let mut dropped = Vec::new();
        for (pos, (&n, (u, g))) in indices.iter().zip(&maps).enumerate() {
            let k = pos + 1;
            let eps = outer_scale(uf, gf, conc.point, iso, k, config)?;
            match choose_rescaling(u, g, conc.point, eps, k, n, config) {
                Ok(rec) => {
                    if records.last().is_some_and(|prev| rec.lambda >= prev.lambda) {
                        warn!("{}: index {n} breaks the decreasing-scale guard", seq.name());
                        dropped.push((n, format!("scale {:e} not below the previous index", rec.lambda)));
                    } else {
                        records.push(rec);
                    }
                }
                Err(
                    e @ (BubbleError::NoConcentration { .. }
                    | BubbleError::LevelNotReached { .. }
                    | BubbleError::CenterGridTooCoarse { .. }),
                ) => {
                    warn!("{}: index {n} dropped: {e}", seq.name());
                    dropped.push((n, e.to_string()));
                }
                Err(e) => return Err(e),
            }
        }
        if records.is_empty() {
            return Err(BubbleError::NonComputable(format!("no admissible index at {:?}", conc.point)));
        }
        let mut rescaled: Vec<(usize, RescaledMap)> = Vec::new();
        let mut chart_energies = Vec::new();
        for rec in &records {
            let pos = indices.iter().position(|&n| n == rec.index).expect("record index is on the ladder");
            let (u, g) = &maps[pos];
            let r = rescale(u, g, rec, config)?;
            chart_energies.push(ball_energy(&r.map, &r.metric, r.omega_center, r.omega_radius, &config.fine)?);
            rescaled.push((rec.index, r));
        }
        let energy = bubble_energy(&rescaled.last().expect("records are nonempty").1, records.last().unwrap(), config)?;
        let chart = *rescaled[0].1.map.domain();
        let kept: Vec<usize> = rescaled.iter().map(|(n, _)| *n).collect();
        let table: Vec<(usize, MapField, MetricField)> =
            rescaled.iter().map(|(n, r)| (*n, r.map.clone(), r.metric.clone())).collect();
        let child_seq = MapSequence::new(format!("{}/{}", seq.name(), i), chart, kept.clone(), seq.energy_bound(), move |n| {
            table
                .iter()
                .find(|(m, _, _)| *m == n)
                .map(|(_, u, g)| (u.clone(), g.clone()))
                .ok_or_else(|| fields::FieldError::InvalidBounds(format!("index {n} is not a rescaled index")))
        });
        let mut children = Vec::new();
        let searched = kept.len() >= 4;
        if searched {
            let sub = detect_full(&child_seq, config)?;
            if !sub.found.is_empty() {
                if level >= config.max_depth {
                    *truncated = true;
                } else {
                    children = expand(&child_seq, config, level + 1, sub.found, truncated)?;
                }
            }
        }
        nodes.push(BubbleNode {
            level,
            point: Some(conc.point),
            mass: conc.mass,
            energy,
            records,
            chart_energies,
            dropped,
            sequence: child_seq,
            searched,
            children,
        });
    }
    Ok(nodes)
}

/// E(ũ_∞) from the finest rescaled map: energies of the chart balls of radii
/// R = 1, 2, 4, … with λR ≤ ε about the chart image of the concentration
/// point, extrapolated in 1/R³.
fn bubble_energy(r: &RescaledMap, rec: &RescalingRecord, config: &BubbleConfig) -> Result<f64> {
    let mut radii = Vec::new();
    let mut big = 1.0;
    while big * rec.lambda <= rec.eps {
        radii.push(big);
        big *= 2.0;
    }
    if radii.len() < 2 {
        return Err(BubbleError::NonComputable(format!("scale {:e} leaves fewer than two chart radii", rec.lambda)));
    }
    let e = radii
        .iter()
        .map(|&big| ball_energy(&r.map, &r.metric, r.omega_center, big, &config.fine))
        .collect::<Result<Vec<_>>>()?;
    Ok(richardson_radius(&e))
}

fn sup_gradient(u: &MapField, g: &MetricField) -> f64 {
    let d = u.dim();
    u.domain()
        .points()
        .par_iter()
        .map(|&y| u.jacobian_at(y).map(|du| norm_sq(&du, d, &g.at(y)).sqrt()).unwrap_or(f64::INFINITY))
        .reduce(|| 0.0, f64::max)
}

fn audit(root: &BubbleNode, config: &BubbleConfig, truncated: bool) -> Result<TreeAudit> {
    let nodes = root.descendants();
    let tol = config.quadrature_tol;
    let mass_lower_bound = nodes.iter().all(|n| n.mass >= 0.5 * config.eps0);
    let level_decrement = nodes
        .iter()
        .all(|n| n.children.iter().all(|c| c.mass <= n.mass - 0.5 * config.eta0 + tol * n.mass));
    let top = root.children.iter().map(|c| c.mass).fold(0.5 * config.eps0, f64::max);
    let depth_bound = (2.0 * (top - 0.5 * config.eps0) / config.eta0).ceil().max(1.0) as usize;
    let level_sets = nodes
        .iter()
        .flat_map(|n| &n.records)
        .all(|r| r.certified(config.eta0, config.solver_tol, config.certify_tol));
    let ledger_defect = nodes
        .iter()
        .flat_map(|n| n.records.iter().zip(&n.chart_energies))
        .map(|(r, e)| (e - r.outer_energy).abs() / r.outer_energy)
        .fold(0.0, f64::max);
    let localization = root.children.iter().all(|b| {
        let h = b.sequence.domain().spacing()[0];
        b.children.iter().all(|c| c.point.is_some_and(|p| dist(p, [0.0; 3]) <= 1.0 + h))
    });
    let mut energy_gap = true;
    for n in &nodes {
        if n.energy < config.eps0 {
            let last = *n.sequence.indices().last().expect("rescaled ladder is nonempty");
            let (u, g) = n.sequence.map(last)?;
            energy_gap &= sup_gradient(&u, &g) <= config.gap_tol;
        }
    }
    Ok(TreeAudit {
        mass_lower_bound,
        level_decrement,
        depth: root.depth(),
        depth_bound,
        level_sets,
        ledger_defect,
        conformal_ledger: ledger_defect <= tol,
        localization,
        energy_gap,
        truncated,
    })
}
