use std::path::PathBuf;
use std::time::Instant;

use crate::report::{write_scenario, write_summary, ScenarioReport};
use crate::spec::ScenarioSpec;
use crate::{suites, Result};

#[derive(Debug)]
pub struct RunOutcome {
    pub root: PathBuf,
    pub reports: Vec<ScenarioReport>,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed())
    }
}

/// Runs every scenario of a validated spec in file order, writing each
/// report as soon as it is complete and the summary last.
pub fn run(spec: &ScenarioSpec) -> Result<RunOutcome> {
    let root = spec.out_dir().join(&spec.name);
    let mut reports = Vec::with_capacity(spec.scenarios.len());
    for name in &spec.scenarios {
        let start = Instant::now();
        let report = suites::run_scenario(spec, name)?;
        log::info!(
            "{} {}: {} in {:.1} s",
            spec.module,
            name,
            if report.passed() { "pass" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        for c in report.failures() {
            log::warn!("{name}: {} = {:e} violates {:?} {:e}", c.quantity, c.value, c.relation, c.bound);
        }
        write_scenario(&root, &report)?;
        reports.push(report);
    }
    write_summary(&root, &spec.name, spec.module, spec.seed, &reports)?;
    Ok(RunOutcome { root, reports })
}
