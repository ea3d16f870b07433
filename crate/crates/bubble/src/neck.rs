use fields::pointwise::norm_sq;
use fields::{boundary_energy, sphere_nodes, MapField, MetricField, Point, Value};
use rayon::prelude::*;

use crate::measure::shell_energy;
use crate::{BubbleConfig, BubbleError, BubbleNode, BubbleTree, MapSequence, Result};

/// Ratio bound for annuli in the smallness regime, calibrated on the
/// gallery annuli (largest measured ratio 0.6362, plus 5%).
pub const C_FROZEN: f64 = 0.668;

/// Finest neck entries entering the diameter fit.
pub const FIT_ENTRIES: usize = 3;

const MESH_POLAR: usize = 8;
const MESH_AZIMUTHAL: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusRatio {
    /// E(u; B(r_out) ∖ B(r_in)).
    pub energy: f64,
    /// ∫_{∂B(r_in)} |d_T u|³ dA.
    pub inner_boundary: f64,
    /// ∫_{∂B(r_out)} |d_T u|³ dA.
    pub outer_boundary: f64,
    /// `None` when the denominator vanishes.
    pub ratio: Option<f64>,
    pub inner_diameter: f64,
    pub outer_diameter: f64,
    /// Both boundary images below the injectivity surrogate and the energy
    /// below γ₁/8.
    pub flag: bool,
}

impl AnnulusRatio {
    /// Ratio within `bound` whenever the smallness flag holds.
    pub fn within(&self, bound: f64) -> bool {
        !self.flag || self.ratio.is_some_and(|r| r <= bound)
    }
}

/// E(annulus)/(r·∫_{∂B_r}|d_T v|³ + ∫_{∂B_1}|d_T v|³) for v(y) = u(c + r_out·y)
/// and r = r_in/r_out. The boundary terms scale to r_in·∫_{∂B(r_in)}|d_T u|³ +
/// r_out·∫_{∂B(r_out)}|d_T u|³, so u is used unscaled.
pub fn annulus_energy_ratio(
    u: &MapField,
    g: &MetricField,
    center: Point,
    r_in: f64,
    r_out: f64,
    config: &BubbleConfig,
) -> Result<AnnulusRatio> {
    if !(r_in > 0.0 && r_in < r_out) {
        return Err(BubbleError::DegenerateAnnulus { inner: r_in, outer: r_out });
    }
    let (polar, az) = (config.fine.polar, config.fine.azimuthal);
    let energy = shell_energy(u, g, center, r_in, r_out, &config.fine)?;
    let inner_boundary = boundary_energy(u, center, r_in, polar, az)?;
    let outer_boundary = boundary_energy(u, center, r_out, polar, az)?;
    let den = r_in * inner_boundary + r_out * outer_boundary;
    let ratio = if den > 1e-300 { Some(energy / den) } else { None };
    let inner_diameter = diameter(&sphere_values(u, center, r_in)?, u.dim());
    let outer_diameter = diameter(&sphere_values(u, center, r_out)?, u.dim());
    let flag = ratio.is_some()
        && inner_diameter < config.injectivity
        && outer_diameter < config.injectivity
        && energy < config.gamma1 / 8.0;
    Ok(AnnulusRatio { energy, inner_boundary, outer_boundary, ratio, inner_diameter, outer_diameter, flag })
}

fn sphere_values(u: &MapField, center: Point, r: f64) -> Result<Vec<Value>> {
    sphere_nodes(center, r, MESH_POLAR, MESH_AZIMUTHAL)
        .iter()
        .map(|n| u.value_at(n.point).map_err(Into::into))
        .collect()
}

/// Largest pairwise distance.
fn diameter(values: &[Value], d: usize) -> f64 {
    values
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            values[i + 1..]
                .iter()
                .map(|b| (0..d).map(|k| (a[k] - b[k]).powi(2)).sum::<f64>().sqrt())
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

/// Area-weighted mean of u over ∂B(center; r).
fn sphere_mean(u: &MapField, center: Point, r: f64, config: &BubbleConfig) -> Result<Vec<f64>> {
    let nodes = sphere_nodes(center, r, config.fine.polar, config.fine.azimuthal);
    let d = u.dim();
    let mut sum = vec![0.0; d];
    let mut area = 0.0;
    for n in &nodes {
        let v = u.value_at(n.point)?;
        for k in 0..d {
            sum[k] += n.weight * v[k];
        }
        area += n.weight;
    }
    Ok(sum.into_iter().map(|s| s / area).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeckEntry {
    /// Ladder position l.
    pub k: usize,
    pub index: usize,
    /// Outer radius ρ_l = ε_k.
    pub rho: f64,
    /// Inner radius σ_l = l·λ_k.
    pub sigma: f64,
    /// diam(u_l(A_l)).
    pub diameter: f64,
    pub annulus: AnnulusRatio,
    /// ε_k·sup_{∂B(c_k; ε_k)} |du_k|.
    pub boundary_gradient: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeckReport {
    pub level: usize,
    pub point: Point,
    pub entries: Vec<NeckEntry>,
    /// First entry from which the diameters strictly decrease.
    pub burn_in: usize,
    /// d_∞ of the least-squares fit d = d_∞ + C/l over the last
    /// [`FIT_ENTRIES`] entries after burn-in.
    pub extrapolant: f64,
    /// Mean of the base map over ∂B(c; ε) at the finest index.
    pub base_endpoint: Vec<f64>,
    /// Value of the bubble at the chart point at infinity.
    pub bubble_endpoint: Vec<f64>,
}

impl NeckReport {
    pub fn endpoint_mismatch(&self) -> f64 {
        self.base_endpoint.iter().zip(&self.bubble_endpoint).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    }

    /// At least three strictly decreasing diameters after burn-in.
    pub fn decreasing(&self) -> bool {
        self.entries.len() >= self.burn_in + 3
    }

    pub fn passed(&self, config: &BubbleConfig) -> bool {
        self.decreasing() && self.extrapolant.abs() <= config.diameter_tol && self.endpoint_mismatch() <= config.endpoint_tol
    }
}

/// Neck annuli A_l = B(c_l; ε_l) ∖ B(c_l; l·λ_l) for every bubble node.
pub fn neck_report(tree: &BubbleTree, config: &BubbleConfig) -> Result<Vec<NeckReport>> {
    let mut out = Vec::new();
    collect(&tree.root, config, &mut out)?;
    Ok(out)
}

fn collect(parent: &BubbleNode, config: &BubbleConfig, out: &mut Vec<NeckReport>) -> Result<()> {
    for node in &parent.children {
        out.push(report(&parent.sequence, node, config)?);
        collect(node, config, out)?;
    }
    Ok(())
}

fn report(seq: &MapSequence, node: &BubbleNode, config: &BubbleConfig) -> Result<NeckReport> {
    let mut entries = Vec::new();
    for rec in &node.records {
        let (u, g) = seq.map(rec.index)?;
        let (rho, sigma) = (rec.eps, rec.k as f64 * rec.lambda);
        if sigma >= rho {
            return Err(BubbleError::DegenerateAnnulus { inner: sigma, outer: rho });
        }
        let mut values = Vec::new();
        for j in 0..config.neck_radii {
            let r = sigma * (rho / sigma).powf(j as f64 / (config.neck_radii - 1) as f64);
            values.extend(sphere_values(&u, rec.center, r)?);
        }
        let annulus = annulus_energy_ratio(&u, &g, rec.center, sigma, rho, config)?;
        let sup = sphere_nodes(rec.center, rho, config.fine.polar, config.fine.azimuthal)
            .iter()
            .map(|n| Ok(norm_sq(&u.jacobian_at(n.point)?, u.dim(), &g.at(n.point)).sqrt()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        entries.push(NeckEntry {
            k: rec.k,
            index: rec.index,
            rho,
            sigma,
            diameter: diameter(&values, u.dim()),
            annulus,
            boundary_gradient: rho * sup,
        });
    }
    let d: Vec<f64> = entries.iter().map(|e| e.diameter).collect();
    let mut burn_in = d.len().saturating_sub(1);
    while burn_in > 0 && d[burn_in - 1] > d[burn_in] {
        burn_in -= 1;
    }
    let from = burn_in.max(entries.len().saturating_sub(FIT_ENTRIES));
    let tail: Vec<(f64, f64)> = entries[from..].iter().map(|e| (1.0 / e.k as f64, e.diameter)).collect();
    let extrapolant = fit_intercept(&tail);
    let rec = node.records.last().expect("bubble nodes carry records");
    let (u, _) = seq.map(rec.index)?;
    let base_endpoint = sphere_mean(&u, rec.center, rec.eps, config)?;
    let last = *node.sequence.indices().last().expect("rescaled ladder is nonempty");
    let (bubble, _) = node.sequence.map(last)?;
    let far = rec.eps / rec.lambda;
    let m1 = sphere_mean(&bubble, [0.0; 3], 0.5 * far, config)?;
    let m2 = sphere_mean(&bubble, [0.0; 3], far, config)?;
    let bubble_endpoint = m1.iter().zip(&m2).map(|(a, b)| (4.0 * b - a) / 3.0).collect();
    Ok(NeckReport {
        level: node.level,
        point: node.point.expect("bubble nodes carry a point"),
        entries,
        burn_in,
        extrapolant,
        base_endpoint,
        bubble_endpoint,
    })
}

/// Intercept of the least-squares line through (x, y).
fn fit_intercept(pts: &[(f64, f64)]) -> f64 {
    match pts.len() {
        0 => 0.0,
        1 => pts[0].1,
        n => {
            let n = n as f64;
            let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
            let (mx, my) = (sx / n, sy / n);
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            if sxx == 0.0 {
                my
            } else {
                my - sxy / sxx * mx
            }
        }
    }
}
