//! Scenario files: one TOML document per run, every tolerance spelled out.
//!
//! ```toml
//! name = "vcp"
//! module = "vcp-suite"
//! scenarios = ["vcp-axioms"]
//! seed = 7
//!
//! [vcp]
//! samples = 10000
//! gallery = 100
//! axiom_tol = 1e-12
//! identity_tol = 1e-10
//! gap_floor = 1e-12
//! equality_tol = 1e-10
//! ```

use std::path::{Path, PathBuf};

use bubble::{BubbleConfig, SphereRule};
use serde::{Deserialize, Serialize};

use crate::catalog::{self, Module};
use crate::{Result, RunError};

pub const DEFAULT_OUT_DIR: &str = "reports";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub name: String,
    pub module: Module,
    pub scenarios: Vec<String>,
    /// Required by the randomized vcp suite.
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub vcp: Option<VcpParams>,
    pub fields: Option<FieldParams>,
    pub bubble: Option<BubbleParams>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VcpParams {
    /// Random tuples or maps per check.
    pub samples: usize,
    /// Smith maps, and separately non-Smith maps, in the mixed gallery.
    pub gallery: usize,
    pub axiom_tol: f64,
    pub identity_tol: f64,
    /// Lower bound −gap_floor for gaps that must be nonnegative.
    pub gap_floor: f64,
    /// Bound on gaps and defects that must vanish.
    pub equality_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldParams {
    pub grid: usize,
    pub refinement: Vec<usize>,
    /// Integrated energy-identity defect on Smith maps.
    pub identity_tol: f64,
    /// Pointwise deviation of the reversed-inclusion density from 2.
    pub density_tol: f64,
    /// Relative energy mismatch under conformal precomposition.
    pub energy_rel: f64,
    /// Allowed ratio of the sampled Smith residual to the difference error.
    pub residual_factor: f64,
    /// Smith residual with analytic derivatives.
    pub residual_tol: f64,
    pub volume_tol: f64,
    pub order_min: f64,
    /// Relative error of the two-chart 3-sphere energy.
    pub sphere_rel: f64,
    pub sphere: SphereRule,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BubbleParams {
    /// Bound on the annulus energy ratio wherever the smallness flag holds.
    pub annulus_bound: f64,
    /// Relative tolerance of masses and bubble energies against the sphere.
    pub mass_rel: f64,
    /// Distance of detected points from the constructed ones.
    pub point_tol: f64,
    pub config: BubbleConfig,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub ladder: Option<Vec<usize>>,
    pub grid: Option<usize>,
}

impl ScenarioSpec {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(RunError::io(format!("reading {}", path.display())))?;
        Self::parse(&text, path)
    }

    /// Parses and validates; `origin` only labels errors.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let spec: Self =
            toml::from_str(text).map_err(|e| RunError::Parse { path: origin.to_path_buf(), message: e.to_string() })?;
        spec.validate(origin)?;
        Ok(spec)
    }

    pub fn apply(&mut self, overrides: &Overrides) {
        if let Some(seed) = overrides.seed {
            self.seed = Some(seed);
        }
        if let Some(dir) = &overrides.out_dir {
            self.out_dir = Some(dir.clone());
        }
        if let Some(grid) = overrides.grid {
            if let Some(f) = &mut self.fields {
                f.grid = grid;
            }
            if let Some(b) = &mut self.bubble {
                b.config.grid = grid;
            }
        }
        if let Some(ladder) = &overrides.ladder {
            match &mut self.bubble {
                Some(b) => b.config.ladder = ladder.clone(),
                None => log::warn!("--ladder has no effect on module {}", self.module),
            }
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    }

    /// Checks scenario names, seeds and the parameter section of the module.
    pub fn validate(&self, origin: &Path) -> Result<()> {
        let parse = |message: String| RunError::Parse { path: origin.to_path_buf(), message };
        if self.name.is_empty() || self.name.contains(['/', '\\']) || self.name.starts_with('.') {
            return Err(parse(format!("name {:?} is not usable as a directory name", self.name)));
        }
        if self.scenarios.is_empty() {
            return Err(parse("no scenarios listed".into()));
        }
        for name in &self.scenarios {
            if catalog::lookup(self.module, name).is_none() {
                return Err(RunError::UnknownScenario { module: self.module.to_string(), name: name.clone() });
            }
        }
        let present = [
            (Module::VcpSuite, self.vcp.is_some(), "vcp"),
            (Module::FieldGallery, self.fields.is_some(), "fields"),
            (Module::BubbleRun, self.bubble.is_some(), "bubble"),
        ];
        for (module, there, table) in present {
            if module == self.module && !there {
                return Err(parse(format!("module {module} needs a [{table}] table")));
            }
            if module != self.module && there {
                return Err(parse(format!("[{table}] does not apply to module {}", self.module)));
            }
        }
        if self.module == Module::VcpSuite && self.seed.is_none() {
            return Err(parse("the vcp suite is randomized and needs a seed".into()));
        }
        if let Some(f) = &self.fields {
            if f.grid < fields::ChartDomain::MIN_RESOLUTION || f.refinement.len() < 2 {
                return Err(parse(format!("grid {} or refinement {:?} too small", f.grid, f.refinement)));
            }
        }
        if let Some(b) = &self.bubble {
            b.config.validate().map_err(|e| parse(e.to_string()))?;
        }
        Ok(())
    }
}
