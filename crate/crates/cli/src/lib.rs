//! Scenario runner behind the `smithlab` binary: scenario files, the builtin
//! catalog, the verification suites and the report writer.

use std::path::PathBuf;

use thiserror::Error;

pub mod catalog;
pub mod report;
pub mod runner;
pub mod spec;
pub mod suites;

pub use catalog::{Entry, Module, CATALOG};
pub use report::{Check, ScenarioReport, Table};
pub use runner::{run, RunOutcome};
pub use spec::{Overrides, ScenarioSpec};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ASSERTION: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_UNKNOWN_SCENARIO: u8 = 3;
pub const EXIT_IO: u8 = 4;
pub const EXIT_COMPUTE: u8 = 5;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("unknown scenario {name:?} for module {module}")]
    UnknownScenario { module: String, name: String },
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Cross(#[from] vcp::VcpError),
    #[error(transparent)]
    Algebra(#[from] xalg::XalgError),
    #[error(transparent)]
    Field(#[from] fields::FieldError),
    #[error(transparent)]
    Bubble(#[from] bubble::BubbleError),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Parse { .. } => EXIT_PARSE,
            RunError::UnknownScenario { .. } => EXIT_UNKNOWN_SCENARIO,
            RunError::Io { .. } => EXIT_IO,
            RunError::Cross(_) | RunError::Algebra(_) | RunError::Field(_) | RunError::Bubble(_) => EXIT_COMPUTE,
        }
    }

    pub(crate) fn io(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> RunError {
        let context = context.into();
        move |source| RunError::Io { context, source }
    }
}

pub type Result<T> = std::result::Result<T, RunError>;
