use std::sync::OnceLock;

use bubble::scenarios::{self, PAIR};
use bubble::*;
use fields::{gallery, ChartDomain, MapField, MetricField, TargetStructure};

fn config() -> BubbleConfig {
    BubbleConfig::default()
}

fn mobius() -> &'static BubbleTree {
    static TREE: OnceLock<BubbleTree> = OnceLock::new();
    TREE.get_or_init(|| build_tree(&scenarios::mobius_s3(&config()).unwrap(), &config()).unwrap())
}

fn pair() -> &'static BubbleTree {
    static TREE: OnceLock<BubbleTree> = OnceLock::new();
    TREE.get_or_init(|| build_tree(&scenarios::two_bubble(&config()).unwrap(), &config()).unwrap())
}

fn dist(a: Point, b: Point) -> f64 {
    (0..3).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>().sqrt()
}

#[test]
fn mobius_tree_has_one_bubble() {
    let tree = mobius();
    assert_eq!(tree.depth(), 1);
    assert_eq!(tree.root.children.len(), 1);
    let node = &tree.root.children[0];
    assert!(dist(node.point.unwrap(), [0.0; 3]) < 1e-6);
    assert!((node.mass / SPHERE_MASS - 1.0).abs() < 0.02);
    assert!((node.energy / node.mass - 1.0).abs() < 0.02);
    assert!(node.dropped.is_empty());
    assert!(node.searched && node.children.is_empty());
    assert!(tree.audit.passed(), "{:?}", tree.audit);
    // the base map is constant: only the box tail remains outside the ball
    assert!(tree.root.energy < 1e-3);
}

#[test]
fn mobius_scales_follow_the_sequence() {
    let node = &mobius().root.children[0];
    let products: Vec<f64> = node.records.iter().map(|r| r.lambda * r.index as f64).collect();
    let (lo, hi) = products.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &p| (a.min(p), b.max(p)));
    assert!(hi / lo <= 2.0, "{products:?}");
    let c = config();
    for r in &node.records {
        assert!(dist(r.center, [0.0; 3]) < 1e-6);
        assert!(r.lambda <= r.radii[0]);
        assert!(r.certified(c.eta0, c.solver_tol, c.certify_tol));
        assert!(r.center_in_d2());
    }
}

#[test]
fn mobius_ledger_balances() {
    let c = config();
    let ledger = energy_accounting(mobius(), &c);
    assert_eq!(ledger.nodes.len(), 1);
    let n = &ledger.nodes[0];
    assert!(n.bracketed && n.balanced, "{n:?}");
    assert!(n.tau.abs() <= 0.02 * n.mass);
    assert!(ledger.defect().abs() <= c.quadrature_tol * ledger.limit_energy);
}

#[test]
fn mobius_conformal_ledger() {
    let node = &mobius().root.children[0];
    for (r, e) in node.records.iter().zip(&node.chart_energies) {
        assert!((e - r.outer_energy).abs() <= 0.01 * r.outer_energy);
    }
}

#[test]
fn mobius_rescaled_maps_converge() {
    let node = &mobius().root.children[0];
    let indices = node.sequence.indices();
    let maps: Vec<MapField> = indices.iter().map(|&n| node.sequence.map(n).unwrap().0).collect();
    let finest = maps.last().unwrap();
    let mut lattice = Vec::new();
    for i in 0..9 {
        for j in 0..9 {
            for k in 0..9 {
                let y = [i, j, k].map(|v| v as f64 / 4.0 - 1.0);
                if dist(y, [0.0; 3]) <= 1.0 {
                    lattice.push(y);
                }
            }
        }
    }
    let gaps: Vec<f64> = maps[..maps.len() - 1]
        .iter()
        .map(|u| {
            lattice
                .iter()
                .map(|&y| {
                    let (a, b) = (u.value_at(y).unwrap(), finest.value_at(y).unwrap());
                    (0..4).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>().sqrt()
                })
                .fold(0.0, f64::max)
        })
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]) || gaps.iter().all(|g| *g < 1e-3), "{gaps:?}");
    // the finest map is u∘(λy + c) = σ⁻¹(s(λy + c)): an identity-type bubble
    let rec = node.records.last().unwrap();
    let s = scenarios::MOBIUS_RATE * rec.index as f64;
    for &y in &lattice {
        let v = finest.value_at(y).unwrap();
        let w = fields::stereo::sigma_inv([0, 1, 2].map(|a| s * (rec.lambda * y[a] + rec.center[a])));
        assert!((0..4).all(|i| (v[i] - w[i]).abs() < 1e-12));
    }
}

#[test]
fn mobius_necks() {
    let c = config();
    let reports = neck_report(mobius(), &c).unwrap();
    assert_eq!(reports.len(), 1);
    let r = &reports[0];
    assert!(r.decreasing(), "{:?}", r.entries.iter().map(|e| e.diameter).collect::<Vec<_>>());
    assert!(r.extrapolant.abs() <= c.diameter_tol, "{}", r.extrapolant);
    assert!(r.endpoint_mismatch() <= c.endpoint_tol);
    assert!(r.passed(&c));
    let grads: Vec<f64> = r.entries.iter().map(|e| e.boundary_gradient).collect();
    assert!(grads.windows(2).all(|w| w[1] < w[0]), "{grads:?}");
    for e in &r.entries {
        assert!(e.annulus.flag);
        assert!(e.annulus.within(C_FROZEN));
    }
}

#[test]
fn two_bubble_tree() {
    let tree = pair();
    assert_eq!(tree.depth(), 1);
    assert_eq!(tree.root.children.len(), 2);
    let mut points: Vec<Point> = tree.root.children.iter().map(|n| n.point.unwrap()).collect();
    points.sort_by(|a, b| a[0].total_cmp(&b[0]));
    for (p, q) in points.iter().zip(PAIR) {
        assert!(dist(*p, q) < 1e-6, "{p:?}");
    }
    for n in &tree.root.children {
        assert!((n.mass / SPHERE_MASS - 1.0).abs() < 0.02);
        assert!((n.energy / SPHERE_MASS - 1.0).abs() < 0.02);
    }
    assert!(tree.depth() <= tree.audit.depth_bound);
    assert!(tree.audit.passed(), "{:?}", tree.audit);
    let ledger = energy_accounting(tree, &config());
    assert!(ledger.passed());
}

#[test]
fn smooth_sequences_have_no_concentration() {
    let c = config();
    let fixed = scenarios::no_bubble(&c).unwrap();
    assert!(detect_concentration(&fixed, &c).unwrap().is_empty());
    let tree = build_tree(&fixed, &c).unwrap();
    assert_eq!(tree.depth(), 0);
    let ledger = energy_accounting(&tree, &c);
    assert!(ledger.nodes.is_empty());
    assert_eq!(ledger.limit_energy, ledger.base_energy);
    assert!(neck_report(&tree, &c).unwrap().is_empty());
    let family = scenarios::dilation_family(&c).unwrap();
    assert!(detect_concentration(&family, &c).unwrap().is_empty());
}

#[test]
fn constant_sequence_has_zero_measure() {
    let c = config();
    let domain = ChartDomain::cube(-1.0, 1.0, 8).unwrap();
    let seq = MapSequence::new("constant", domain, c.ladder.clone(), 1.0, move |_| {
        Ok((MapField::analytic(domain, TargetStructure::euclidean(4).unwrap(), |_| [0.5; 8]), MetricField::euclidean()))
    });
    let tree = build_tree(&seq, &c).unwrap();
    assert_eq!(tree.root.mass, 0.0);
    assert!(tree.totals.iter().all(|t| *t == 0.0));
}

#[test]
fn declared_bound_is_enforced() {
    let c = config();
    let seq = scenarios::mobius_s3(&c).unwrap();
    let tight = MapSequence::new("tight", *seq.domain(), c.ladder.clone(), 50.0, {
        let seq = seq.clone();
        move |n| seq.map(n).map_err(|e| fields::FieldError::InvalidBounds(e.to_string()))
    });
    assert!(matches!(detect_concentration(&tight, &c), Err(BubbleError::EnergyBound { .. })));
    let short = seq.with_indices(vec![8, 16, 32]);
    assert!(matches!(detect_concentration(&short, &c), Err(BubbleError::LadderTooShort { got: 3, .. })));
}

#[test]
fn truncated_ladder_keeps_the_bracket() {
    let c = BubbleConfig { ladder: vec![2, 4, 8, 16], ..config() };
    let tree = build_tree(&scenarios::mobius_s3(&c).unwrap(), &c).unwrap();
    let node = &tree.root.children[0];
    assert!(!node.dropped.is_empty());
    let ledger = energy_accounting(&tree, &c);
    for n in &ledger.nodes {
        assert!(n.bracketed, "{n:?}");
    }
}

#[test]
fn annulus_ratios() {
    let c = config();
    let g = MetricField::euclidean();
    let cube = ChartDomain::cube(-1.0, 1.0, 5).unwrap();
    let constant = MapField::analytic(cube, TargetStructure::associative(), |_| [0.0; 8]);
    let zero = annulus_energy_ratio(&constant, &g, [0.0; 3], 0.5, 1.0, &c).unwrap();
    assert!(zero.ratio.is_none() && !zero.flag);
    assert!(matches!(
        annulus_energy_ratio(&constant, &g, [0.0; 3], 1.0, 0.5, &c),
        Err(BubbleError::DegenerateAnnulus { .. })
    ));
    // inclusion: (√3/(2√2))·(1 − r³)/(1 + r³), independent of the scale
    let inclusion = gallery::associative_inclusion(cube, 0.4);
    for r in [0.1, 0.25, 0.5] {
        let a = annulus_energy_ratio(&inclusion, &g, [0.0; 3], r, 1.0, &c).unwrap();
        let exact = 3f64.sqrt() / (2.0 * 2f64.sqrt()) * (1.0 - r.powi(3)) / (1.0 + r.powi(3));
        assert!((a.ratio.unwrap() / exact - 1.0).abs() < 0.01);
        assert!(a.flag && a.within(C_FROZEN));
    }
}

#[test]
fn annulus_regression_values() {
    let c = config();
    let g = MetricField::euclidean();
    let cube = ChartDomain::cube(-1.0, 1.0, 5).unwrap();
    let inclusion = gallery::associative_inclusion(cube, 0.4);
    let mob = gallery::mobius_inclusion(ChartDomain::cube(0.5, 1.5, 5).unwrap(), [0.0; 3], 1.0).unwrap();
    let frozen = [
        (annulus_energy_ratio(&inclusion, &g, [0.0; 3], 0.25, 1.0, &c).unwrap(), 0.593_052),
        (annulus_energy_ratio(&mob, &g, [1.0; 3], 0.04, 0.4, &c).unwrap(), 0.548_701),
    ];
    for (a, value) in frozen {
        assert!((a.ratio.unwrap() / value - 1.0).abs() < 0.05);
    }
    let first = &neck_report(mobius(), &c).unwrap()[0].entries[0];
    assert!((first.annulus.ratio.unwrap() / 0.636_167 - 1.0).abs() < 0.05);
}
