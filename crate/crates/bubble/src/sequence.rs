use std::fmt;
use std::sync::Arc;

use fields::{ChartDomain, MapField, MetricField};

use crate::{BubbleError, Result};

pub type Generator = Arc<dyn Fn(usize) -> fields::Result<(MapField, MetricField)> + Send + Sync>;

/// Indexed family of maps on a common chart box, each with its own metric.
#[derive(Clone)]
pub struct MapSequence {
    name: String,
    domain: ChartDomain,
    indices: Vec<usize>,
    energy_bound: f64,
    generator: Generator,
}

impl MapSequence {
    pub fn new(
        name: impl Into<String>,
        domain: ChartDomain,
        indices: Vec<usize>,
        energy_bound: f64,
        generator: impl Fn(usize) -> fields::Result<(MapField, MetricField)> + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), domain, indices, energy_bound, generator: Arc::new(generator) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &ChartDomain {
        &self.domain
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Declared bound E₀ on the bare energies.
    pub fn energy_bound(&self) -> f64 {
        self.energy_bound
    }

    pub fn with_indices(&self, indices: Vec<usize>) -> Self {
        Self { indices, ..self.clone() }
    }

    /// The map and metric at index n.
    pub fn map(&self, n: usize) -> Result<(MapField, MetricField)> {
        let (u, g) = (self.generator)(n)?;
        if u.domain() != &self.domain {
            return Err(BubbleError::InvalidConfig(format!("{}: index {n} is on another chart", self.name)));
        }
        Ok((u, g))
    }
}

impl fmt::Debug for MapSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MapSequence")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("indices", &self.indices)
            .field("energy_bound", &self.energy_bound)
            .finish_non_exhaustive()
    }
}
