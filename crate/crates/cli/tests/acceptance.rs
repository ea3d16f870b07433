//! Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bubble::scenarios::{self, PAIR};
use bubble::{annulus_energy_ratio, BubbleConfig, SphereRule, C_FROZEN, SPHERE_MASS};
use fields::{gallery, ChartDomain, MetricField};
use smithlab::spec::{FieldParams, VcpParams};
use smithlab::suites::bubble::{compute, BubbleRun};
use smithlab::suites::{fields as field_suite, vcp as vcp_suite};
use smithlab::ScenarioReport;

const SEED: u64 = 7;
const SAMPLES: usize = 10_000;
const GALLERY: usize = 100;

const AXIOM_TOL: f64 = 1e-12;
const AXIOM_SECONDS: f64 = 5.0;
const IDENTITY_TOL: f64 = 1e-10;
const GAP_FLOOR: f64 = 1e-12;
const EQUALITY_TOL: f64 = 1e-10;
/// C(3,3)·3⁻³·|diag(1,2,3)|⁶ − det², evaluated directly.
const DIAG_GAP: f64 = 14.0 * 14.0 * 14.0 / 27.0 - 36.0;
const DIAG_GAP_TOL: f64 = 1e-6;

const GRID: usize = 48;
const ENERGY_IDENTITY_TOL: f64 = 1e-6;
const DENSITY_TOL: f64 = 1e-8;
const MAP_SECONDS: f64 = 30.0;
const ENERGY_REL: f64 = 0.01;
const RESIDUAL_FACTOR: f64 = 10.0;
const LIFT_RESIDUAL_TOL: f64 = 1e-8;
const VOLUME_TOL: f64 = 1e-10;
const ORDER_MIN: f64 = 0.8;
const REFINEMENT: [usize; 3] = [16, 32, 64];
const SPHERE_REL: f64 = 0.01;

const LADDER: [usize; 4] = [8, 16, 32, 64];
const MASS_REL: f64 = 0.02;
const TAU_REL: f64 = 0.02;
const NECK_EXTRAPOLANT: f64 = 1e-2;
const ENDPOINT_TOL: f64 = 1e-3;
const PIPELINE_SECONDS: f64 = 180.0;
const POINT_TOL: f64 = 1e-6;
const REGRESSION_DRIFT: f64 = 0.05;
/// Frozen annulus ratios: inclusion (scale 0.4, r 0.25), Möbius inclusion
/// about (1,1,1) on 0.04..0.4, first neck annulus of the Möbius run.
const FROZEN_RATIOS: [f64; 3] = [0.593_052, 0.548_701, 0.636_167];

struct Line {
    pass: bool,
    title: &'static str,
    detail: String,
}

fn line(pass: bool, title: &'static str, detail: String) -> Line {
    Line { pass, title, detail }
}

fn vcp_params() -> VcpParams {
    VcpParams {
        samples: SAMPLES,
        gallery: GALLERY,
        axiom_tol: AXIOM_TOL,
        identity_tol: IDENTITY_TOL,
        gap_floor: GAP_FLOOR,
        equality_tol: EQUALITY_TOL,
    }
}

fn field_params() -> FieldParams {
    FieldParams {
        grid: GRID,
        refinement: REFINEMENT.to_vec(),
        identity_tol: ENERGY_IDENTITY_TOL,
        density_tol: DENSITY_TOL,
        energy_rel: ENERGY_REL,
        residual_factor: RESIDUAL_FACTOR,
        residual_tol: LIFT_RESIDUAL_TOL,
        volume_tol: VOLUME_TOL,
        order_min: ORDER_MIN,
        sphere_rel: SPHERE_REL,
        sphere: SphereRule { radial: 48, polar: 48, azimuthal: 96, grading: 1.0 },
    }
}

fn bubble_config() -> BubbleConfig {
    BubbleConfig { ladder: LADDER.to_vec(), grid: GRID, ..BubbleConfig::default() }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn vcp(name: &str) -> (ScenarioReport, Duration) {
    timed(|| vcp_suite::run(name, &vcp_params(), SEED).expect(name))
}

fn field(name: &str) -> (ScenarioReport, Duration) {
    timed(|| field_suite::run(name, &field_params()).expect(name))
}

fn get(r: &ScenarioReport, key: &str) -> f64 {
    r.number(key).unwrap_or(f64::NAN)
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    (0..3).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>().sqrt()
}

fn axioms() -> Line {
    let (r, t) = vcp("vcp-axioms");
    let (orth, metric) = (get(&r, "worst_orth_defect"), get(&r, "worst_metric_defect"));
    let secs = t.as_secs_f64();
    line(
        orth <= AXIOM_TOL && metric <= AXIOM_TOL && secs < AXIOM_SECONDS,
        "vcp axiom suite",
        format!("orth {orth:.2e}, metric {metric:.2e} (tol {AXIOM_TOL:e}); {secs:.2} s (limit {AXIOM_SECONDS} s)"),
    )
}

fn identity() -> Line {
    let (r, _) = vcp("fundamental-identity");
    let (g2, spin7, square) = (get(&r, "G2_7_worst"), get(&r, "Spin7_8_worst"), get(&r, "complex_square_plus_identity"));
    line(
        g2 <= IDENTITY_TOL && spin7 <= IDENTITY_TOL && square == 0.0,
        "fundamental identity",
        format!("G2 {g2:.2e}, Spin7 {spin7:.2e} (tol {IDENTITY_TOL:e}); max |P^2 + I| = {square:e} (exact)"),
    )
}

fn hadamard() -> Line {
    let (r, _) = vcp("hadamard");
    let min = get(&r, "gaussian_r2_min_gap").min(get(&r, "gaussian_r3_min_gap"));
    let conformal = get(&r, "conformal_r2_max_gap").max(get(&r, "conformal_r3_max_gap"));
    let diag = get(&r, "diag123_r3_gap");
    line(
        min >= -GAP_FLOOR && conformal <= EQUALITY_TOL && (diag - DIAG_GAP).abs() <= DIAG_GAP_TOL,
        "hadamard dichotomy",
        format!(
            "random min gap {min:.3e} (floor -{GAP_FLOOR:e}); conformal max {conformal:.2e} (tol {EQUALITY_TOL:e}); \
             diag(1,2,3) r=3 {diag:.7} vs {DIAG_GAP:.7} (tol {DIAG_GAP_TOL:e})"
        ),
    )
}

fn calibration() -> Line {
    let (r, _) = vcp("calibration-gap");
    let (min, mismatches, smith) = (get(&r, "gaussian_min_gap"), get(&r, "mismatches"), get(&r, "smith_count"));
    line(
        min >= -GAP_FLOOR && mismatches == 0.0 && smith == GALLERY as f64 && r.passed(),
        "generalized calibration inequality",
        format!("random min gap {min:.3e} (floor -{GAP_FLOOR:e}); {mismatches} mismatches, {smith} Smith of {GALLERY}"),
    )
}

fn energy_identity() -> Line {
    let mut pass = true;
    let mut parts = Vec::new();
    for name in ["associative-plane", "dilation", "mobius-precompose"] {
        let (r, t) = field(name);
        let d = get(&r, "map_identity_defect");
        pass &= d.abs() <= ENERGY_IDENTITY_TOL && t.as_secs_f64() < MAP_SECONDS;
        parts.push(format!("{name} {d:.1e} ({:.1} s)", t.as_secs_f64()));
    }
    let (r, t) = field("holo-lift");
    let d = get(&r, "parabola_identity_defect").abs().max(get(&r, "line_identity_defect").abs());
    pass &= d <= ENERGY_IDENTITY_TOL && t.as_secs_f64() < MAP_SECONDS;
    parts.push(format!("holo-lift {d:.1e} ({:.1} s)", t.as_secs_f64()));
    let (r, t) = field("reversed-inclusion");
    let (lo, hi) = (get(&r, "density_min"), get(&r, "density_max"));
    let dev = (lo - 2.0).abs().max((hi - 2.0).abs());
    pass &= dev <= DENSITY_TOL && t.as_secs_f64() < MAP_SECONDS;
    parts.push(format!("reversed density in [{lo:.10}, {hi:.10}]"));
    line(
        pass,
        "energy identity",
        format!("{} (tol {ENERGY_IDENTITY_TOL:e}, density tol {DENSITY_TOL:e}, N = {GRID})", parts.join(", ")),
    )
}

fn conformal_invariance() -> Line {
    let (r, _) = field("mobius-precompose");
    let mismatch = get(&r, "ball_energy_mismatch");
    let ratio = get(&r, "sampled_residual") / get(&r, "difference_error");
    line(
        mismatch <= ENERGY_REL && ratio <= RESIDUAL_FACTOR,
        "conformal invariance",
        format!(
            "ball energy mismatch {mismatch:.2e} (tol {ENERGY_REL}); residual / difference error {ratio:.3} (limit {RESIDUAL_FACTOR})"
        ),
    )
}

fn holomorphic_lift() -> Line {
    let (r, _) = field("holo-lift");
    let (res, vol) = (get(&r, "line_smith_residual"), get(&r, "line_volume_condition"));
    line(
        res <= LIFT_RESIDUAL_TOL && vol <= VOLUME_TOL,
        "holomorphic lift",
        format!("line lift residual {res:.2e} (tol {LIFT_RESIDUAL_TOL:e}); volume condition {vol:.2e} (tol {VOLUME_TOL:e})"),
    )
}

fn three_harmonic() -> Line {
    let (r, _) = field("nharmonic-order");
    let order = get(&r, "min_observed_order");
    line(order >= ORDER_MIN, "smith maps are 3-harmonic", format!("min observed order {order:.3} over N = {REFINEMENT:?} (min {ORDER_MIN})"))
}

fn sphere_volume() -> Line {
    let (r, _) = field("s3-identity");
    let (e, rel) = (get(&r, "energy"), get(&r, "volume_relative_error"));
    line(
        rel <= SPHERE_REL,
        "gray map volume",
        format!("two-chart energy {e:.6} vs 2 pi^2 = {:.6}, rel {rel:.2e} (tol {SPHERE_REL})", 2.0 * std::f64::consts::PI.powi(2)),
    )
}

fn mobius_pipeline(run: &BubbleRun, elapsed: Duration, config: &BubbleConfig) -> Line {
    let tree = &run.tree;
    let secs = elapsed.as_secs_f64();
    let one = tree.root.children.len() == 1 && tree.depth() == 1;
    let Some(node) = run.ledger.nodes.first().filter(|_| one) else {
        return line(false, "bubble pipeline (moebius)", format!("{} concentration points", tree.root.children.len()));
    };
    let q = config.quadrature_tol * node.mass;
    let tau_ok = node.tau.abs() <= TAU_REL * node.mass && node.tau >= -q && node.tau <= config.eta0 + q;
    let energy_ok = (node.mass - node.bubble_energy).abs() <= MASS_REL * node.mass;
    let neck = run.necks.first();
    let neck_ok = neck.is_some_and(|n| n.decreasing() && n.extrapolant.abs() <= NECK_EXTRAPOLANT);
    let endpoint = neck.map_or(f64::NAN, |n| n.endpoint_mismatch());
    line(
        one && tau_ok && energy_ok && neck_ok && endpoint <= ENDPOINT_TOL && secs < PIPELINE_SECONDS,
        "bubble pipeline (moebius)",
        format!(
            "1 point, depth 1; m {:.4}, bubble {:.4}, tau {:.2e} (<= {TAU_REL} m, in [-{q:.2e}, eta0 + {q:.2e}]); \
             neck extrapolant {:.2e} (tol {NECK_EXTRAPOLANT:e}), burn-in {}; endpoint {endpoint:.2e} (tol {ENDPOINT_TOL:e}); \
             {secs:.0} s (limit {PIPELINE_SECONDS} s)",
            node.mass,
            node.bubble_energy,
            node.tau,
            neck.map_or(f64::NAN, |n| n.extrapolant),
            neck.map_or(0, |n| n.burn_in),
        ),
    )
}

fn two_bubble(run: &BubbleRun, single: &BubbleRun) -> Line {
    let tree = &run.tree;
    let children = &tree.root.children;
    let oracle = single.tree.root.children.first().map_or(f64::NAN, |n| n.mass);
    let mut pass = children.len() == 2 && tree.depth() == 1 && tree.depth() <= tree.audit.depth_bound;
    let mut parts = Vec::new();
    for q in PAIR {
        match children.iter().filter(|c| c.point.is_some_and(|p| dist(p, q) <= POINT_TOL)).collect::<Vec<_>>()[..] {
            [c] => {
                let rel = (c.mass / oracle - 1.0).abs().max((c.mass / SPHERE_MASS - 1.0).abs());
                pass &= rel <= MASS_REL;
                parts.push(format!("{q:?}: m {:.4} (rel {rel:.1e})", c.mass));
            }
            _ => {
                pass = false;
                parts.push(format!("{q:?}: no unique child"));
            }
        }
    }
    line(
        pass,
        "two-bubble scenario",
        format!(
            "{}; single-bubble oracle {oracle:.4} (tol {MASS_REL}); depth {} <= bound {}",
            parts.join(", "),
            tree.depth(),
            tree.audit.depth_bound
        ),
    )
}

fn level_sets(runs: &[(&str, &BubbleRun)], config: &BubbleConfig) -> Line {
    let mut count = 0;
    let mut worst = 0.0f64;
    let mut certified = true;
    for (_, run) in runs {
        for rec in run.tree.nodes().iter().flat_map(|n| &n.records) {
            count += 1;
            worst = worst.max(rec.level_defect(config.eta0));
            certified &= rec.certified(config.eta0, config.solver_tol, config.certify_tol);
        }
    }
    let names: Vec<&str> = runs.iter().map(|(n, _)| *n).collect();
    line(
        count > 0 && worst <= config.solver_tol && certified,
        "eta0 level-set contract",
        format!(
            "{count} records over {names:?}; worst level defect {worst:.2e} (tol {:e}); lattice certified: {certified}",
            config.solver_tol
        ),
    )
}

fn annuli(runs: &[(&str, &BubbleRun)], config: &BubbleConfig) -> Line {
    let g = MetricField::euclidean();
    let cube = ChartDomain::cube(-1.0, 1.0, 5).expect("static domain");
    let inclusion = gallery::associative_inclusion(cube, 0.4);
    let mob = gallery::mobius_inclusion(ChartDomain::cube(0.5, 1.5, 5).expect("static domain"), [0.0; 3], 1.0)
        .expect("orientation-preserving");
    let mut ratios = Vec::new();
    for r in [0.1, 0.25, 0.5] {
        ratios.push(annulus_energy_ratio(&inclusion, &g, [0.0; 3], r, 1.0, config).expect("inclusion annulus"));
    }
    ratios.push(annulus_energy_ratio(&mob, &g, [1.0; 3], 0.04, 0.4, config).expect("moebius annulus"));
    let regression = [ratios[1].ratio, ratios[3].ratio, runs[0].1.necks.first().and_then(|n| n.entries[0].annulus.ratio)];
    for (_, run) in runs {
        ratios.extend(run.necks.iter().flat_map(|n| n.entries.iter().map(|e| e.annulus.clone())));
    }
    let flagged: Vec<f64> = ratios.iter().filter(|a| a.flag).map(|a| a.ratio.unwrap_or(f64::NAN)).collect();
    let largest = flagged.iter().copied().fold(0.0f64, f64::max);
    let bounded = ratios.iter().all(|a| a.within(C_FROZEN));
    let drift = regression
        .iter()
        .zip(FROZEN_RATIOS)
        .map(|(r, f)| r.map_or(f64::INFINITY, |r| (r / f - 1.0).abs()))
        .fold(0.0f64, f64::max);
    line(
        bounded && !flagged.is_empty() && drift <= REGRESSION_DRIFT,
        "annulus ratio",
        format!(
            "{} flagged of {} annuli, largest ratio {largest:.4} <= C {C_FROZEN}; regression drift {drift:.1e} (limit {REGRESSION_DRIFT})",
            flagged.len(),
            ratios.len()
        ),
    )
}

fn main() -> ExitCode {
    let config = bubble_config();
    let bubble = |name: &str| timed(|| compute(name, &config).expect(name));
    let mut lines = vec![axioms(), identity(), hadamard(), calibration()];
    lines.extend([energy_identity(), conformal_invariance(), holomorphic_lift(), three_harmonic(), sphere_volume()]);
    let (mobius, t) = bubble("mobius-s3");
    lines.push(mobius_pipeline(&mobius, t, &config));
    let (pair, _) = bubble("two-bubble");
    lines.push(two_bubble(&pair, &mobius));
    let (flat, _) = bubble("no-bubble");
    let (family, _) = bubble("dilation-family");
    let runs = [("mobius-s3", &mobius), ("two-bubble", &pair), ("no-bubble", &flat), ("dilation-family", &family)];
    lines.push(level_sets(&runs, &config));
    lines.push(annuli(&runs, &config));
    debug_assert_eq!(scenarios::NAMES.len(), runs.len());

    for (i, l) in lines.iter().enumerate() {
        println!("criterion {:>2}: {}  {}: {}", i + 1, if l.pass { "PASS" } else { "FAIL" }, l.title, l.detail);
    }
    let failed = lines.iter().filter(|l| !l.pass).count();
    println!("acceptance: {} of {} criteria passed", lines.len() - failed, lines.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
