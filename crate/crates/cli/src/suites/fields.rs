//! Energy identity, residual and energy checks on the analytic map gallery.

use std::f64::consts::PI;

use fields::gallery::{associative_inclusion, mobius_inclusion, reversed_inclusion};
use fields::stereo::s3_identity_energy;
use fields::{
    conformality_defect, differential, energy, energy_identity_defect, energy_on_grid, lift_holomorphic,
    nharmonic_residual, smith_residual_field, ChartDomain, ChartKind, FiberFunction, HolomorphicCurve, Jacobian,
    MapField, MetricField, QuadratureRule, Region, Scheme, MAX_D, UNPREFACTORED,
};
use num_complex::Complex64;

use crate::report::{num, Check, ScenarioReport, Table};
use crate::spec::FieldParams;
use crate::{Result, RunError};

/// Ball in the Möbius box and the quadrature used on it and on its image.
const MOBIUS_BALL: ([f64; 3], f64) = ([1.0, 1.0, 1.0], 0.5);

pub fn run(name: &str, params: &FieldParams) -> Result<ScenarioReport> {
    let n = params.grid;
    let cube = ChartDomain::cube(0.0, 1.0, n)?;
    match name {
        "associative-plane" => smith_map(name, &associative_inclusion(cube, 1.0), &MetricField::euclidean(), params),
        "dilation" => smith_map(name, &associative_inclusion(cube, 2.0), &MetricField::euclidean(), params),
        "mobius-precompose" => mobius(params),
        "holo-lift" => lifts(params),
        "reversed-inclusion" => reversed(params),
        "nharmonic-order" => order(params),
        "s3-identity" => sphere(params),
        _ => Err(RunError::UnknownScenario { module: "field-gallery".into(), name: name.into() }),
    }
}

fn energy_table() -> Table {
    Table::new("energies", &["map", "region", "energy", "bare_energy"])
}

fn energy_row(map: &str, region: &str, prefactored: f64) -> Vec<String> {
    vec![map.into(), region.into(), num(prefactored), num(prefactored * UNPREFACTORED)]
}

fn defect_table() -> Table {
    Table::new(
        "defects",
        &["map", "identity_defect_total", "identity_density_min", "identity_density_max", "smith_residual_max", "conformality_max"],
    )
}

/// Identity, residual and conformality checks with analytic derivatives.
fn smith_checks(
    report: &mut ScenarioReport,
    defects: &mut Table,
    label: &str,
    u: &MapField,
    g: &MetricField,
    params: &FieldParams,
) -> Result<()> {
    let (field, total) = energy_identity_defect(u, g, Scheme::Analytic)?;
    let residual = smith_residual_field(u, g, Scheme::Analytic)?.max();
    let conformal = conformality_defect(u, g, Scheme::Analytic)?.max();
    defects.push(vec![label.into(), num(total), num(field.min()), num(field.max()), num(residual), num(conformal)]);
    report.check(Check::at_most(format!("{label}_identity_defect"), total.abs(), params.identity_tol));
    report.check(Check::at_most(format!("{label}_smith_residual"), residual, params.residual_tol));
    report.note(&format!("{label}_identity_defect"), total);
    report.note(&format!("{label}_smith_residual"), residual);
    Ok(())
}

fn smith_map(name: &str, u: &MapField, g: &MetricField, params: &FieldParams) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new(name);
    let mut defects = defect_table();
    smith_checks(&mut report, &mut defects, "map", u, g, params)?;
    let mut energies = energy_table();
    let e = energy_on_grid(u, g, Scheme::Analytic)?.total;
    energies.push(energy_row("map", "grid", e));
    report.note("energy", e);
    report.tables.extend([defects, energies]);
    Ok(report)
}

fn mobius(params: &FieldParams) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("mobius-precompose");
    let domain = ChartDomain::cube(0.5, 1.5, params.grid)?;
    let u = mobius_inclusion(domain, [0.0; 3], 1.0)?;
    let g = MetricField::euclidean();
    let mut defects = defect_table();
    smith_checks(&mut report, &mut defects, "map", &u, &g, params)?;

    // sampled residual against the size of the difference error itself
    let sampled = smith_residual_field(&u.to_sampled(), &g, Scheme::Central2)?.max();
    let fd = difference_error(&u)?;
    report.check(Check::at_most("sampled_residual_over_difference_error", sampled / fd, params.residual_factor));
    report.note("sampled_residual", sampled);
    report.note("difference_error", fd);

    // E(u∘F; B) against E(u; F(B)) for the reflected inversion in the unit sphere
    let (x0, r) = MOBIUS_BALL;
    let d2 = x0.iter().map(|c| c * c).sum::<f64>();
    let image_r = r / (d2 - r * r);
    let image_c = [x0[0] / (d2 - r * r), x0[1] / (d2 - r * r), -x0[2] / (d2 - r * r)];
    let rule = QuadratureRule::Spherical {
        radial: params.sphere.radial,
        polar: params.sphere.polar,
        azimuthal: params.sphere.azimuthal,
        grading: 1.0,
    };
    let before = energy(&u, &g, &Region::Ball { center: x0, radius: r }, &rule)?.total;
    let after = energy(&associative_inclusion(domain, 1.0), &g, &Region::Ball { center: image_c, radius: image_r }, &rule)?
        .total;
    let rel = (before - after).abs() / after;
    report.check(Check::at_most("ball_energy_mismatch", rel, params.energy_rel));
    report.note("ball_energy_mismatch", rel);

    let mut energies = energy_table();
    energies.push(energy_row("composite", "ball", before));
    energies.push(energy_row("inclusion", "image_ball", after));
    energies.push(energy_row("composite", "grid", energy_on_grid(&u.to_sampled(), &g, Scheme::Central2)?.total));
    report.tables.extend([defects, energies]);
    Ok(report)
}

/// max over the grid of |du|·|du − Δu|, Δu the central-difference
/// differential of the sampled map.
pub fn difference_error(u: &MapField) -> Result<f64> {
    let fd = differential(&u.to_sampled(), Scheme::Central2)?;
    let exact = differential(u, Scheme::Analytic)?;
    let norm = |j: &Jacobian| j.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    Ok((0..u.domain().len())
        .map(|i| {
            let mut diff = [[0.0; 3]; MAX_D];
            for (r, (a, b)) in diff.iter_mut().zip(fd.at(i).iter().zip(exact.at(i))) {
                for c in 0..3 {
                    r[c] = a[c] - b[c];
                }
            }
            norm(exact.at(i)) * norm(&diff)
        })
        .fold(0.0, f64::max))
}

fn lifts(params: &FieldParams) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("holo-lift");
    let domain = ChartDomain::new(ChartKind::FlatBox, [-1.0, -1.0, 0.0], [1.0, 1.0, 2.0 * PI], params.grid)?;
    let points = domain.points();
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let curves = [
        ("line", HolomorphicCurve::line(), 1.0),
        ("parabola", HolomorphicCurve::new(move |z| [z, z * z * 0.5, zero], move |z| [one, z, zero]), 1.0),
        ("parabola_doubled_fiber", HolomorphicCurve::new(move |z| [z, z * z * 0.5, zero], move |z| [one, z, zero]), 2.0),
    ];
    let mut defects = defect_table();
    let mut volume = Table::new("volume", &["map", "volume_condition_defect", "cauchy_riemann_defect"]);
    let mut energies = energy_table();
    for (label, curve, s) in curves {
        let lift = lift_holomorphic(&curve, &FiberFunction::scaled_angle(s), domain)?;
        smith_checks(&mut report, &mut defects, label, &lift.map, &lift.metric, params)?;
        let vol = lift.volume_condition_defect(&points);
        volume.push(vec![label.into(), num(vol), num(lift.cr_defect)]);
        report.check(Check::at_most(format!("{label}_volume_condition"), vol, params.volume_tol));
        report.note(&format!("{label}_volume_condition"), vol);
        energies.push(energy_row(label, "grid", energy_on_grid(&lift.map, &lift.metric, Scheme::Analytic)?.total));
    }
    report.tables.extend([defects, volume, energies]);
    Ok(report)
}

fn reversed(params: &FieldParams) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("reversed-inclusion");
    let domain = ChartDomain::cube(-1.0, 1.0, params.grid)?;
    let u = reversed_inclusion(domain);
    let g = MetricField::euclidean();
    let (field, total) = energy_identity_defect(&u, &g, Scheme::Central2)?;
    let worst = field.values.iter().fold(0.0f64, |m, v| m.max((v - 2.0).abs()));
    let residual = smith_residual_field(&u, &g, Scheme::Central2)?;
    let mut defects = defect_table();
    defects.push(vec![
        "reversed".into(),
        num(total),
        num(field.min()),
        num(field.max()),
        num(residual.max()),
        num(conformality_defect(&u, &g, Scheme::Central2)?.max()),
    ]);
    report.check(Check::at_most("density_deviation_from_two", worst, params.density_tol));
    report.note("density_min", field.min());
    report.note("density_max", field.max());
    report.note("identity_defect_total", total);
    let mut energies = energy_table();
    energies.push(energy_row("reversed", "grid", energy_on_grid(&u, &g, Scheme::Central2)?.total));
    report.tables.extend([defects, energies]);
    Ok(report)
}

fn order(params: &FieldParams) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("nharmonic-order");
    let g = MetricField::euclidean();
    let mut table = Table::new("refinement", &["grid", "residual_interior_max", "observed_order"]);
    let mut errors = Vec::new();
    for &n in &params.refinement {
        let u = mobius_inclusion(ChartDomain::cube(0.5, 1.5, n)?, [0.0; 3], 1.0)?;
        errors.push(nharmonic_residual(&u.to_sampled(), &g, Scheme::Central2)?.interior_max(2));
    }
    let mut worst = f64::INFINITY;
    for (i, (&n, &e)) in params.refinement.iter().zip(&errors).enumerate() {
        let p = if i == 0 {
            f64::NAN
        } else {
            let ratio = params.refinement[i] as f64 / params.refinement[i - 1] as f64;
            (errors[i - 1] / e).ln() / ratio.ln()
        };
        if i > 0 {
            worst = worst.min(p);
        }
        table.push(vec![n.to_string(), num(e), num(p)]);
    }
    report.check(Check::at_least("min_observed_order", worst, params.order_min));
    report.note("min_observed_order", worst);
    report.tables.push(table);
    Ok(report)
}

fn sphere(params: &FieldParams) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("s3-identity");
    let (south, north) = s3_identity_energy(&params.sphere.rule())?;
    let total = south + north;
    let exact = 2.0 * PI * PI;
    let rel = (total - exact).abs() / exact;
    report.check(Check::at_most("volume_relative_error", rel, params.sphere_rel));
    report.note("energy", total);
    report.note("volume_relative_error", rel);
    let mut energies = energy_table();
    energies.push(energy_row("identity", "south_unit_ball", south));
    energies.push(energy_row("identity", "north_unit_ball", north));
    energies.push(energy_row("identity", "sphere", total));
    report.tables.push(energies);
    Ok(report)
}
