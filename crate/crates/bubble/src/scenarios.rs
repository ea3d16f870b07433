//! Sequences with known concentration behavior, and closed-form energies
//! of their profiles.

use std::f64::consts::PI;

use fields::stereo::{chart_inverse_jacobian, sigma_inv, Chart};
use fields::{gallery, ChartDomain, MapField, MetricField, Point, TargetStructure, MAX_D};

use crate::{BubbleConfig, MapSequence, Result, SPHERE_MASS};

/// Dilation rate: the n-th Möbius map concentrates at scale 1/(16n).
pub const MOBIUS_RATE: f64 = 16.0;

/// Half-width of the chart box of the bubbling scenarios.
pub const BOX: f64 = 2.0;

/// Headroom of the declared energy bounds over the limit energies.
const BOUND_MARGIN: f64 = 1.05;

/// Bare energy of y ↦ σ⁻¹(y) over the chart ball of radius R:
/// 3√3·4π·(arctan R + R(R² − 1)/(1 + R²)²).
pub fn chart_ball_energy(radius: f64) -> f64 {
    let r = radius;
    SPHERE_MASS / (2.0 * PI * PI) * 4.0 * PI * (r.atan() + r * (r * r - 1.0) / (1.0 + r * r).powi(2))
}

/// Bare energy of x ↦ σ⁻¹(s(x − p)) over B(p; r).
pub fn mobius_ball_energy(scale: f64, radius: f64) -> f64 {
    chart_ball_energy(scale * radius)
}

/// x ↦ σ⁻¹(s(x − p)) written into components `offset..offset+4` of the
/// target.
fn profile(x: Point, center: Point, scale: f64, offset: usize, v: &mut [f64; MAX_D]) {
    let p = sigma_inv([0, 1, 2].map(|a| scale * (x[a] - center[a])));
    v[offset..offset + 4].copy_from_slice(&p);
}

fn profile_jacobian(x: Point, center: Point, scale: f64, offset: usize, j: &mut [[f64; 3]; MAX_D]) {
    let y = [0, 1, 2].map(|a| scale * (x[a] - center[a]));
    let dj = chart_inverse_jacobian(Chart::South, y);
    for (i, row) in dj.iter().enumerate() {
        j[offset + i] = row.map(|v| scale * v);
    }
}

/// x ↦ σ⁻¹(s(x − p)) into ℝ⁴ with its Jacobian.
pub fn mobius_map(domain: ChartDomain, center: Point, scale: f64) -> MapField {
    let target = TargetStructure::euclidean(4).expect("dimension 4 is supported");
    MapField::analytic(domain, target, move |x| {
        let mut v = [0.0; MAX_D];
        profile(x, center, scale, 0, &mut v);
        v
    })
    .with_jacobian(move |x| {
        let mut j = [[0.0; 3]; MAX_D];
        profile_jacobian(x, center, scale, 0, &mut j);
        j
    })
}

/// x ↦ (σ⁻¹(s(x − p)), σ⁻¹(s(x − q))) into ℝ⁸.
pub fn mobius_pair(domain: ChartDomain, p: Point, q: Point, scale: f64) -> MapField {
    let target = TargetStructure::euclidean(8).expect("dimension 8 is supported");
    MapField::analytic(domain, target, move |x| {
        let mut v = [0.0; MAX_D];
        profile(x, p, scale, 0, &mut v);
        profile(x, q, scale, 4, &mut v);
        v
    })
    .with_jacobian(move |x| {
        let mut j = [[0.0; 3]; MAX_D];
        profile_jacobian(x, p, scale, 0, &mut j);
        profile_jacobian(x, q, scale, 4, &mut j);
        j
    })
}

fn bubbling_domain(config: &BubbleConfig) -> Result<ChartDomain> {
    Ok(ChartDomain::cube(-BOX, BOX, config.grid.max(ChartDomain::MIN_RESOLUTION))?)
}

/// Möbius maps of S³ written on a flat chart box, u_n(x) = σ⁻¹(16n·x):
/// all energy concentrates at the origin.
pub fn mobius_s3(config: &BubbleConfig) -> Result<MapSequence> {
    let domain = bubbling_domain(config)?;
    Ok(MapSequence::new("mobius-s3", domain, config.ladder.clone(), BOUND_MARGIN * SPHERE_MASS, move |n| {
        Ok((mobius_map(domain, [0.0; 3], MOBIUS_RATE * n as f64), MetricField::euclidean()))
    }))
}

/// The two concentration points of [`two_bubble`].
pub const PAIR: [Point; 2] = [[-1.0, 0.0, 0.0], [1.0, 0.0, 0.0]];

/// Two Möbius concentrations in separate factors of ℝ⁴ × ℝ⁴.
pub fn two_bubble(config: &BubbleConfig) -> Result<MapSequence> {
    let domain = bubbling_domain(config)?;
    Ok(MapSequence::new("two-bubble", domain, config.ladder.clone(), BOUND_MARGIN * 2.0 * SPHERE_MASS, move |n| {
        Ok((mobius_pair(domain, PAIR[0], PAIR[1], MOBIUS_RATE * n as f64), MetricField::euclidean()))
    }))
}

/// The associative inclusion on [−1, 1]³, repeated.
pub fn no_bubble(config: &BubbleConfig) -> Result<MapSequence> {
    let domain = ChartDomain::cube(-1.0, 1.0, config.grid.max(ChartDomain::MIN_RESOLUTION))?;
    let bound = BOUND_MARGIN * 8.0 * fields::UNPREFACTORED;
    Ok(MapSequence::new("no-bubble", domain, config.ladder.clone(), bound, move |_| {
        Ok((gallery::associative_inclusion(domain, 1.0), MetricField::euclidean()))
    }))
}

/// u_n = (1 + 1/n)·(associative inclusion ∘ reflected inversion) on
/// [0.5, 1.5]³, a family with a uniform gradient bound.
pub fn dilation_family(config: &BubbleConfig) -> Result<MapSequence> {
    let domain = ChartDomain::cube(0.5, 1.5, config.grid.max(ChartDomain::MIN_RESOLUTION))?;
    let base = gallery::mobius_inclusion(domain, [0.0; 3], 1.0)?;
    // ∫|x|⁻⁶ over the box is below 5, so 2³·3√3·5 bounds every map
    let bound = 8.0 * fields::UNPREFACTORED * 5.0;
    Ok(MapSequence::new("dilation-family", domain, config.ladder.clone(), bound, move |n| {
        let s = 1.0 + 1.0 / n as f64;
        let (u, j) = (base.clone(), base.clone());
        let scaled = MapField::analytic(domain, TargetStructure::associative(), move |x| {
            u.value_at(x).map(|v| v.map(|c| s * c)).unwrap_or([f64::NAN; MAX_D])
        })
        .with_jacobian(move |x| {
            j.jacobian_at(x).map(|d| d.map(|row| row.map(|c| s * c))).unwrap_or([[f64::NAN; 3]; MAX_D])
        });
        Ok((scaled, MetricField::euclidean()))
    }))
}

/// Scenario generators by name.
pub fn by_name(name: &str, config: &BubbleConfig) -> Option<Result<MapSequence>> {
    match name {
        "mobius-s3" => Some(mobius_s3(config)),
        "two-bubble" => Some(two_bubble(config)),
        "no-bubble" => Some(no_bubble(config)),
        "dilation-family" => Some(dilation_family(config)),
        _ => None,
    }
}

pub const NAMES: [&str; 4] = ["dilation-family", "mobius-s3", "no-bubble", "two-bubble"];
