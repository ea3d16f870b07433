//! Scenario implementations, one module per suite.

use crate::catalog::Module;
use crate::report::ScenarioReport;
use crate::spec::ScenarioSpec;
use crate::{Result, RunError};

pub mod bubble;
pub mod fields;
pub mod vcp;

/// Runs one named scenario of `spec`; the spec must have been validated.
pub fn run_scenario(spec: &ScenarioSpec, name: &str) -> Result<ScenarioReport> {
    let missing = |what: &str| RunError::Parse {
        path: format!("<{}>", spec.name).into(),
        message: format!("module {} needs {what}", spec.module),
    };
    match spec.module {
        Module::VcpSuite => {
            let params = spec.vcp.as_ref().ok_or_else(|| missing("a [vcp] table"))?;
            vcp::run(name, params, spec.seed.ok_or_else(|| missing("a seed"))?)
        }
        Module::FieldGallery => fields::run(name, spec.fields.as_ref().ok_or_else(|| missing("a [fields] table"))?),
        Module::BubbleRun => bubble::run(name, spec.bubble.as_ref().ok_or_else(|| missing("a [bubble] table"))?),
    }
}
