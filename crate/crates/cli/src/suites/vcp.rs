//! Linear-algebra checks of the builtin cross products.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use vcp::{
    fundamental_identity_defect, generalized_calibration_gap, random_orthonormal_frame, random_unit_vector,
    smith_defect_linear, CrossProduct, VcpError, VcpKind,
};
use xalg::{hadamard_gap, LinearMap};

use crate::report::{num, Check, ScenarioReport, Table};
use crate::spec::VcpParams;
use crate::{Result, RunError};

/// One representative of each family, plus a second dimension where the
/// family has one.
pub const BUILTINS: [(VcpKind, usize); 6] = [
    (VcpKind::HodgeStar, 3),
    (VcpKind::HodgeStar, 4),
    (VcpKind::Complex, 2),
    (VcpKind::Complex, 6),
    (VcpKind::G2, 7),
    (VcpKind::Spin7, 8),
];

pub fn run(name: &str, params: &VcpParams, seed: u64) -> Result<ScenarioReport> {
    match name {
        "vcp-axioms" => axioms(params, seed),
        "fundamental-identity" => identity(params, seed),
        "hadamard" => hadamard(params, seed),
        "calibration-gap" => calibration(params, seed),
        _ => Err(RunError::UnknownScenario { module: "vcp-suite".into(), name: name.into() }),
    }
}

fn axioms(params: &VcpParams, seed: u64) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("vcp-axioms");
    let mut table = Table::new("axioms", &["kind", "n", "fold", "samples", "orth_defect", "metric_defect"]);
    let (mut orth, mut metric) = (0.0f64, 0.0f64);
    for (kind, n) in BUILTINS {
        let p = CrossProduct::builtin(kind, n)?;
        let d = p.axiom_defect(params.samples, seed);
        table.push(vec![
            kind.name().into(),
            n.to_string(),
            p.fold().to_string(),
            params.samples.to_string(),
            num(d.orth),
            num(d.metric),
        ]);
        report.check(Check::at_most(format!("{}_{n}_orth", kind.name()), d.orth, params.axiom_tol));
        report.check(Check::at_most(format!("{}_{n}_metric", kind.name()), d.metric, params.axiom_tol));
        orth = orth.max(d.orth);
        metric = metric.max(d.metric);
    }
    report.tables.push(table);
    report.note("worst_orth_defect", orth);
    report.note("worst_metric_defect", metric);
    Ok(report)
}

fn identity(params: &VcpParams, seed: u64) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("fundamental-identity");
    let mut table = Table::new("identity", &["kind", "n", "fold", "samples", "dependent", "worst_defect"]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (kind, n) in BUILTINS {
        let p = CrossProduct::builtin(kind, n)?;
        let k = p.fold();
        let (mut worst, mut dependent) = (0.0f64, 0usize);
        for _ in 0..params.samples {
            let us: Vec<Vec<f64>> = (0..k - 1).map(|_| random_unit_vector(&mut rng, n)).collect();
            let w = random_unit_vector(&mut rng, n);
            let refs: Vec<&[f64]> = us.iter().map(|u| u.as_slice()).collect();
            match fundamental_identity_defect(&p, &refs, &w) {
                Ok(d) => worst = worst.max(d),
                Err(VcpError::DependentTuple(_)) => dependent += 1,
                Err(e) => return Err(e.into()),
            }
        }
        table.push(vec![
            kind.name().into(),
            n.to_string(),
            k.to_string(),
            params.samples.to_string(),
            dependent.to_string(),
            num(worst),
        ]);
        report.check(Check::at_most(format!("{}_{n}_identity", kind.name()), worst, params.identity_tol));
        report.note(&format!("{}_{n}_worst", kind.name()), worst);
    }
    report.tables.push(table);

    // fold one: the identity reads P² = −I, checked entrywise
    let mut square = Table::new("complex_square", &["n", "max_entry_of_square_plus_identity"]);
    let mut worst = 0.0f64;
    for n in [2, 4, 6, 8] {
        let p = CrossProduct::builtin(VcpKind::Complex, n)?;
        let sq = p.table() * p.table() + DMatrix::<f64>::identity(n, n);
        let m = sq.amax();
        square.push(vec![n.to_string(), num(m)]);
        worst = worst.max(m);
    }
    report.tables.push(square);
    report.check(Check::at_most("complex_square_plus_identity", worst, 0.0));
    report.note("complex_square_plus_identity", worst);
    Ok(report)
}

fn hadamard(params: &VcpParams, seed: u64) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("hadamard");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = Table::new("hadamard", &["family", "r", "count", "min_gap", "max_abs_gap"]);
    let mut push = |family: &str, r: usize, gaps: &[f64]| {
        let min = gaps.iter().copied().fold(f64::INFINITY, f64::min);
        let max_abs = gaps.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        table.push(vec![family.into(), r.to_string(), gaps.len().to_string(), num(min), num(max_abs)]);
        (min, max_abs)
    };
    let random: Vec<LinearMap> = (0..params.samples).map(|_| gaussian(&mut rng, 7, 3)).collect();
    let conformal: Vec<LinearMap> = (0..params.gallery)
        .map(|_| {
            let s = rng.random_range(0.2..3.0);
            random_smith(&mut rng, s)
        })
        .collect::<Result<_>>()?;
    for r in [2, 3] {
        let gaps = random.iter().map(|a| hadamard_gap(a, r)).collect::<xalg::Result<Vec<_>>>()?;
        let (min, _) = push("gaussian", r, &gaps);
        report.check(Check::at_least(format!("gaussian_r{r}_min_gap"), min, -params.gap_floor));
        report.note(&format!("gaussian_r{r}_min_gap"), min);
        let gaps = conformal.iter().map(|a| hadamard_gap(a, r)).collect::<xalg::Result<Vec<_>>>()?;
        let (_, max_abs) = push("conformal", r, &gaps);
        report.check(Check::at_most(format!("conformal_r{r}_gap"), max_abs, params.equality_tol));
        report.note(&format!("conformal_r{r}_max_gap"), max_abs);
    }
    let mut diag = LinearMap::zeros(7, 3);
    for i in 0..3 {
        diag[(i, i)] = (i + 1) as f64;
    }
    let g = hadamard_gap(&diag, 3)?;
    push("diag123", 3, &[g]);
    report.note("diag123_r3_gap", g);
    report.tables.push(table);
    Ok(report)
}

fn calibration(params: &VcpParams, seed: u64) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("calibration-gap");
    let (p, q) = (CrossProduct::builtin(VcpKind::HodgeStar, 3)?, CrossProduct::builtin(VcpKind::G2, 7)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_random = f64::INFINITY;
    for _ in 0..params.samples {
        min_random = min_random.min(generalized_calibration_gap(&gaussian(&mut rng, 7, 3), &q, None)?);
    }
    report.check(Check::at_least("gaussian_min_gap", min_random, -params.gap_floor));
    report.note("gaussian_min_gap", min_random);

    let mut table = Table::new("calibration", &["family", "index", "gap", "smith_defect", "gap_zero", "defect_zero"]);
    let tol = params.equality_tol;
    let (mut mismatches, mut smith, mut min_gap) = (0usize, 0usize, f64::INFINITY);
    for i in 0..2 * params.gallery {
        let (family, a) = if i < params.gallery {
            let s = rng.random_range(0.3..2.5);
            ("smith", random_smith(&mut rng, s)?)
        } else {
            match i % 3 {
                0 => ("gaussian", gaussian(&mut rng, 7, 3)),
                1 => ("reversed", random_smith(&mut rng, 1.0)? * diagonal([1.0, 1.0, -1.0])),
                _ => ("stretched", random_smith(&mut rng, 1.0)? * diagonal([1.0, 1.5, 1.0])),
            }
        };
        let gap = generalized_calibration_gap(&a, &q, None)?;
        let defect = smith_defect_linear(&a, &p, &q)?;
        let (gz, dz) = (gap <= tol, defect <= tol);
        mismatches += usize::from(gz != dz);
        smith += usize::from(dz);
        min_gap = min_gap.min(gap);
        table.push(vec![family.into(), i.to_string(), num(gap), num(defect), gz.to_string(), dz.to_string()]);
    }
    report.tables.push(table);
    report.check(Check::at_least("gallery_min_gap", min_gap, -params.gap_floor));
    report.check(Check::at_most("mismatches", mismatches as f64, 0.0));
    report.check(Check::holds("smith_count_matches_construction", smith == params.gallery));
    report.note("mismatches", mismatches as f64);
    report.note("smith_count", smith as f64);
    Ok(report)
}

pub fn gaussian(rng: &mut ChaCha8Rng, m: usize, n: usize) -> LinearMap {
    DMatrix::from_fn(m, n, |_, _| rng.sample(StandardNormal))
}

fn diagonal(d: [f64; 3]) -> LinearMap {
    DMatrix::from_diagonal(&DVector::from_vec(d.to_vec()))
}

/// A rotation of ℝ³ drawn from orthonormal frames.
pub fn rotation(rng: &mut ChaCha8Rng) -> LinearMap {
    let f = random_orthonormal_frame(rng, 3, 3);
    let mut r = DMatrix::from_fn(3, 3, |i, j| f[j][i]);
    if r.determinant() < 0.0 {
        r.column_mut(2).neg_mut();
    }
    r
}

/// s·[u₁ u₂ J(u₁,u₂)]·R: a conformal map onto a random associative plane.
pub fn random_smith(rng: &mut ChaCha8Rng, s: f64) -> Result<LinearMap> {
    let j = CrossProduct::builtin(VcpKind::G2, 7)?;
    let u1 = random_unit_vector(rng, 7);
    let raw = random_unit_vector(rng, 7);
    let d: f64 = raw.iter().zip(&u1).map(|(a, b)| a * b).sum();
    let mut u2: Vec<f64> = raw.iter().zip(&u1).map(|(a, b)| a - d * b).collect();
    let n2 = u2.iter().map(|x| x * x).sum::<f64>().sqrt();
    u2.iter_mut().for_each(|x| *x /= n2);
    let u3 = j.apply(&[&u1, &u2])?;
    let frame = DMatrix::from_fn(7, 3, |i, c| [&u1, &u2, &u3][c][i]);
    Ok(frame * rotation(rng) * s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> VcpParams {
        VcpParams { samples: 50, gallery: 12, axiom_tol: 1e-12, identity_tol: 1e-10, gap_floor: 1e-12, equality_tol: 1e-10 }
    }

    #[test]
    fn small_runs_pass() {
        for name in ["vcp-axioms", "fundamental-identity", "hadamard", "calibration-gap"] {
            let r = run(name, &params(), 3).unwrap();
            assert!(r.passed(), "{name}: {:?}", r.failures());
        }
        assert!(matches!(run("x", &params(), 3), Err(RunError::UnknownScenario { .. })));
    }

    #[test]
    fn diagonal_gap_closed_form() {
        // C(3,3)·3⁻³·|A|⁶ − det² with |A|² = 14
        let r = run("hadamard", &params(), 1).unwrap();
        assert!((r.number("diag123_r3_gap").unwrap() - (14f64.powi(3) / 27.0 - 36.0)).abs() < 1e-12);
    }
}
