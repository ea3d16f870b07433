//! Report tables, assertion checks and their atomic on-disk layout:
//!
//! ```text
//! <out-dir>/<spec name>/summary.json
//! <out-dir>/<spec name>/<scenario>/checks.csv
//! <out-dir>/<spec name>/<scenario>/<table>.csv
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::catalog::Module;
use crate::{Result, RunError};

/// Scientific notation with the shortest round-tripping mantissa; −0 is
/// written as 0.
pub fn num(x: f64) -> String {
    format!("{:e}", x + 0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.to_string(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len(), "row width in table {}", self.name);
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

/// One assertion-grade comparison. NaN values fail.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub quantity: String,
    pub value: f64,
    pub relation: Relation,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(quantity: impl Into<String>, value: f64, bound: f64) -> Self {
        Self { quantity: quantity.into(), value, relation: Relation::AtMost, bound, pass: value <= bound }
    }

    pub fn at_least(quantity: impl Into<String>, value: f64, bound: f64) -> Self {
        Self { quantity: quantity.into(), value, relation: Relation::AtLeast, bound, pass: value >= bound }
    }

    /// A boolean condition, recorded as 1 ≥ 1 or 0 ≥ 1.
    pub fn holds(quantity: impl Into<String>, ok: bool) -> Self {
        Self::at_least(quantity, if ok { 1.0 } else { 0.0 }, 1.0)
    }

    fn row(&self) -> Vec<String> {
        let rel = match self.relation {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        };
        vec![self.quantity.clone(), num(self.value), rel.to_string(), num(self.bound), self.pass.to_string()]
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScenarioReport {
    pub scenario: String,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
    /// Key numbers for the run summary.
    pub numbers: BTreeMap<String, f64>,
}

impl ScenarioReport {
    pub fn new(scenario: &str) -> Self {
        Self { scenario: scenario.to_string(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn note(&mut self, key: &str, value: f64) {
        self.numbers.insert(key.to_string(), value);
    }

    pub fn number(&self, key: &str) -> Option<f64> {
        self.numbers.get(key).copied()
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn checks_table(&self) -> Table {
        let mut t = Table::new("checks", &["quantity", "value", "relation", "bound", "pass"]);
        for c in &self.checks {
            t.push(c.row());
        }
        t
    }
}

#[derive(Debug, Serialize)]
struct ScenarioSummary<'a> {
    scenario: &'a str,
    passed: bool,
    failed: Vec<&'a str>,
    numbers: &'a BTreeMap<String, f64>,
}

#[derive(Debug, Serialize)]
struct Summary<'a> {
    name: &'a str,
    module: Module,
    seed: Option<u64>,
    passed: bool,
    scenarios: Vec<ScenarioSummary<'a>>,
}

/// Writes the tables of one scenario into a staging directory under `root`
/// and renames it to `root/<scenario>`, replacing an earlier report.
pub fn write_scenario(root: &Path, report: &ScenarioReport) -> Result<()> {
    fs::create_dir_all(root).map_err(RunError::io(format!("creating {}", root.display())))?;
    let staging = tempfile::Builder::new()
        .prefix(".staging-")
        .tempdir_in(root)
        .map_err(RunError::io(format!("staging in {}", root.display())))?;
    for table in report.tables.iter().chain(std::iter::once(&report.checks_table())) {
        let path = staging.path().join(format!("{}.csv", table.name));
        fs::write(&path, table.to_csv()).map_err(RunError::io(format!("writing {}", path.display())))?;
    }
    let target = root.join(&report.scenario);
    if target.exists() {
        fs::remove_dir_all(&target).map_err(RunError::io(format!("removing {}", target.display())))?;
    }
    let staged = staging.keep();
    fs::rename(&staged, &target).map_err(RunError::io(format!("moving report to {}", target.display())))
}

/// Writes `root/summary.json` through a temporary file in `root`.
pub fn write_summary(
    root: &Path,
    name: &str,
    module: Module,
    seed: Option<u64>,
    reports: &[ScenarioReport],
) -> Result<()> {
    let summary = Summary {
        name,
        module,
        seed,
        passed: reports.iter().all(|r| r.passed()),
        scenarios: reports
            .iter()
            .map(|r| ScenarioSummary {
                scenario: &r.scenario,
                passed: r.passed(),
                failed: r.failures().into_iter().map(|c| c.quantity.as_str()).collect(),
                numbers: &r.numbers,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    let target = root.join("summary.json");
    let mut tmp = tempfile::NamedTempFile::new_in(root).map_err(RunError::io(format!("staging in {}", root.display())))?;
    tmp.write_all(text.as_bytes()).map_err(RunError::io("writing summary"))?;
    tmp.persist(&target).map_err(|e| RunError::Io { context: format!("writing {}", target.display()), source: e.error })?;
    Ok(())
}
