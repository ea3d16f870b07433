//! Bubble-tree extraction, energy ledger and neck reports for the builtin
//! sequences. Energies are reported bare and prefactored.

use bubble::scenarios::{self, PAIR};
use bubble::{
    build_tree, energy_accounting, neck_report, BubbleConfig, BubbleTree, EnergyLedger, NeckReport,
    Point, SPHERE_MASS,
};
use fields::UNPREFACTORED;

use crate::catalog::{self, Module};
use crate::report::{num, Check, ScenarioReport, Table};
use crate::spec::BubbleParams;
use crate::{Result, RunError};

/// Everything computed for one bubble scenario.
#[derive(Debug)]
pub struct BubbleRun {
    pub tree: BubbleTree,
    pub ledger: EnergyLedger,
    pub necks: Vec<NeckReport>,
}

pub fn compute(name: &str, config: &BubbleConfig) -> Result<BubbleRun> {
    let seq = scenarios::by_name(name, config)
        .ok_or_else(|| RunError::UnknownScenario { module: Module::BubbleRun.to_string(), name: name.into() })??;
    let tree = build_tree(&seq, config)?;
    let ledger = energy_accounting(&tree, config);
    let necks = neck_report(&tree, config)?;
    Ok(BubbleRun { tree, ledger, necks })
}

/// Concentration points the builtin sequences are constructed with.
pub fn constructed_points(name: &str) -> Vec<Point> {
    match name {
        "mobius-s3" => vec![[0.0; 3]],
        "two-bubble" => PAIR.to_vec(),
        _ => Vec::new(),
    }
}

pub fn run(name: &str, params: &BubbleParams) -> Result<ScenarioReport> {
    let entry = catalog::lookup(Module::BubbleRun, name)
        .ok_or_else(|| RunError::UnknownScenario { module: Module::BubbleRun.to_string(), name: name.into() })?;
    let config = &params.config;
    let run = compute(name, config)?;
    let mut report = ScenarioReport::new(name);
    let children = &run.tree.root.children;

    report.check(Check::holds(format!("bubble_count_is_{}", entry.bubbles), children.len() == entry.bubbles));
    for (i, p) in constructed_points(name).into_iter().enumerate() {
        let nearest = children.iter().filter_map(|c| c.point).map(|q| dist(p, q)).fold(f64::INFINITY, f64::min);
        report.check(Check::at_most(format!("point_{i}_offset"), nearest, params.point_tol));
    }
    for (i, c) in children.iter().enumerate() {
        let m = (c.mass / SPHERE_MASS - 1.0).abs();
        let e = (c.energy / SPHERE_MASS - 1.0).abs();
        report.check(Check::at_most(format!("bubble_{i}_mass_vs_sphere"), m, params.mass_rel));
        report.check(Check::at_most(format!("bubble_{i}_energy_vs_sphere"), e, params.mass_rel));
    }
    audit_checks(&mut report, &run.tree);
    for rec in run.tree.nodes().iter().flat_map(|n| &n.records) {
        report.check(Check::holds(
            format!("record_k{}_certified", rec.k),
            rec.certified(config.eta0, config.solver_tol, config.certify_tol),
        ));
    }
    for (i, n) in run.ledger.nodes.iter().enumerate() {
        report.check(Check::holds(format!("node_{i}_tau_bracketed"), n.bracketed));
        report.check(Check::at_most(format!("node_{i}_tau_over_mass"), n.tau.abs() / n.mass, config.audit_tol));
        report.note(&format!("node_{i}_tau"), n.tau);
    }
    for (i, neck) in run.necks.iter().enumerate() {
        report.check(Check::holds(format!("neck_{i}_diameters_decrease"), neck.decreasing()));
        report.check(Check::at_most(format!("neck_{i}_extrapolant"), neck.extrapolant.abs(), config.diameter_tol));
        report.check(Check::at_most(format!("neck_{i}_endpoint_mismatch"), neck.endpoint_mismatch(), config.endpoint_tol));
        for e in neck.entries.iter().filter(|e| e.annulus.flag) {
            report.check(Check::at_most(
                format!("neck_{i}_k{}_annulus_ratio", e.k),
                e.annulus.ratio.unwrap_or(f64::NAN),
                params.annulus_bound,
            ));
        }
        report.note(&format!("neck_{i}_extrapolant"), neck.extrapolant);
        report.note(&format!("neck_{i}_endpoint_mismatch"), neck.endpoint_mismatch());
    }

    report.note("bubbles", children.len() as f64);
    report.note("depth", run.tree.depth() as f64);
    report.note("limit_energy", run.ledger.limit_energy);
    report.note("ledger_defect", run.ledger.defect());
    for (i, c) in children.iter().enumerate() {
        report.note(&format!("bubble_{i}_mass"), c.mass);
        report.note(&format!("bubble_{i}_energy"), c.energy);
    }
    report.tables = vec![
        nodes_table(&run.tree),
        levels_table(&run.tree, config),
        ledger_table(&run),
        totals_table(&run),
        necks_table(&run.necks),
    ];
    Ok(report)
}

fn dist(a: Point, b: Point) -> f64 {
    (0..3).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>().sqrt()
}

fn audit_checks(report: &mut ScenarioReport, tree: &BubbleTree) {
    let a = &tree.audit;
    report.check(Check::holds("audit_mass_lower_bound", a.mass_lower_bound));
    report.check(Check::holds("audit_level_decrement", a.level_decrement));
    report.check(Check::at_most("audit_depth", a.depth as f64, a.depth_bound as f64));
    report.check(Check::holds("audit_level_sets", a.level_sets));
    report.check(Check::holds("audit_conformal_ledger", a.conformal_ledger));
    report.check(Check::holds("audit_localization", a.localization));
    report.check(Check::holds("audit_energy_gap", a.energy_gap));
    report.check(Check::holds("audit_not_truncated", !a.truncated));
    report.note("depth_bound", a.depth_bound as f64);
    report.note("conformal_ledger_defect", a.ledger_defect);
}

fn pre(bare: f64) -> String {
    num(bare / UNPREFACTORED)
}

fn point_cells(p: Option<Point>) -> [String; 3] {
    match p {
        Some(p) => p.map(num),
        None => [String::new(), String::new(), String::new()],
    }
}

fn nodes_table(tree: &BubbleTree) -> Table {
    let mut t = Table::new(
        "nodes",
        &[
            "level",
            "x",
            "y",
            "z",
            "mass",
            "mass_prefactored",
            "energy",
            "energy_prefactored",
            "children",
            "dropped_records",
        ],
    );
    for n in tree.nodes() {
        let [x, y, z] = point_cells(n.point);
        t.push(vec![
            n.level.to_string(),
            x,
            y,
            z,
            num(n.mass),
            pre(n.mass),
            num(n.energy),
            pre(n.energy),
            n.children.len().to_string(),
            n.dropped.len().to_string(),
        ]);
    }
    t
}

fn levels_table(tree: &BubbleTree, config: &BubbleConfig) -> Table {
    let mut t = Table::new(
        "levels",
        &[
            "level",
            "x",
            "y",
            "z",
            "k",
            "index",
            "eps",
            "lambda",
            "center_x",
            "center_y",
            "center_z",
            "level_value",
            "level_value_prefactored",
            "outer_energy",
            "outer_energy_prefactored",
            "chart_energy",
            "spacing",
            "certified",
        ],
    );
    for n in tree.nodes() {
        for (i, r) in n.records.iter().enumerate() {
            let [x, y, z] = point_cells(n.point);
            let chart = n.chart_energies.get(i).copied().unwrap_or(f64::NAN);
            t.push(vec![
                n.level.to_string(),
                x,
                y,
                z,
                r.k.to_string(),
                r.index.to_string(),
                num(r.eps),
                num(r.lambda),
                num(r.center[0]),
                num(r.center[1]),
                num(r.center[2]),
                num(r.level),
                pre(r.level),
                num(r.outer_energy),
                pre(r.outer_energy),
                num(chart),
                num(r.spacing),
                r.certified(config.eta0, config.solver_tol, config.certify_tol).to_string(),
            ]);
        }
    }
    t
}

fn ledger_table(run: &BubbleRun) -> Table {
    let mut t = Table::new(
        "ledger",
        &["level", "x", "y", "z", "mass", "bubble_energy", "children_mass", "tau", "tau_prefactored", "bracketed", "balanced"],
    );
    for n in &run.ledger.nodes {
        let [x, y, z] = point_cells(n.point);
        t.push(vec![
            n.level.to_string(),
            x,
            y,
            z,
            num(n.mass),
            num(n.bubble_energy),
            num(n.children_mass),
            num(n.tau),
            pre(n.tau),
            n.bracketed.to_string(),
            n.balanced.to_string(),
        ]);
    }
    t
}

fn totals_table(run: &BubbleRun) -> Table {
    let mut t = Table::new("totals", &["quantity", "energy", "energy_prefactored"]);
    let l = &run.ledger;
    let mut push = |q: String, v: f64| t.push(vec![q, num(v), pre(v)]);
    push("limit_energy".into(), l.limit_energy);
    push("base_energy".into(), l.base_energy);
    push("bubble_energy".into(), l.bubble_energy);
    push("ledger_defect".into(), l.defect());
    for (n, total) in run.tree.root.sequence.indices().iter().zip(&run.tree.totals) {
        push(format!("total_n{n}"), *total);
    }
    t
}

fn necks_table(necks: &[NeckReport]) -> Table {
    let mut t = Table::new(
        "necks",
        &[
            "level",
            "x",
            "y",
            "z",
            "k",
            "index",
            "rho",
            "sigma",
            "diameter",
            "annulus_energy",
            "annulus_energy_prefactored",
            "inner_boundary",
            "outer_boundary",
            "ratio",
            "flag",
            "boundary_gradient",
        ],
    );
    for neck in necks {
        for e in &neck.entries {
            let [x, y, z] = point_cells(Some(neck.point));
            t.push(vec![
                neck.level.to_string(),
                x,
                y,
                z,
                e.k.to_string(),
                e.index.to_string(),
                num(e.rho),
                num(e.sigma),
                num(e.diameter),
                num(e.annulus.energy),
                pre(e.annulus.energy),
                num(e.annulus.inner_boundary),
                num(e.annulus.outer_boundary),
                e.annulus.ratio.map(num).unwrap_or_default(),
                e.annulus.flag.to_string(),
                num(e.boundary_gradient),
            ]);
        }
    }
    t
}
