//! Energy concentration in sequences of maps from 3-dimensional domains:
//! concentration detection, rescaling selection, bubble extraction, and the
//! audits of the resulting bubble tree (energy balance, neck diameters,
//! annulus ratios).
//!
//! Every energy in this crate is bare, ∫|du|³√g dx, without the 1/(√3)³
//! prefactor used by `fields`.

mod accounting;
mod config;
mod detect;
mod measure;
mod neck;
mod rescaling;
pub mod scenarios;
mod sequence;
mod tree;

pub use accounting::{energy_accounting, EnergyLedger, NodeBalance};
pub use config::{BubbleConfig, SphereRule, SPHERE_MASS};
pub use detect::{detect_concentration, richardson_radius, richardson_sequence, Concentration};
pub use measure::{anchored_ball_energy, ball_energy, bare_density, energy_density, shell_energy, MeasureGrid};
pub use neck::{annulus_energy_ratio, neck_report, AnnulusRatio, NeckEntry, NeckReport, C_FROZEN};
pub use rescaling::{choose_rescaling, outer_scale, round_metric_gap, rescale, RescaledMap, RescalingRecord, ScanEntry};
pub use sequence::{Generator, MapSequence};
pub use tree::{build_tree, BubbleNode, BubbleTree, TreeAudit};

pub use fields::Point;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BubbleError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("ladder has {got} indices, at least {min} are required")]
    LadderTooShort { got: usize, min: usize },
    #[error("index {index}: energy {energy:e} exceeds the declared bound {bound:e}")]
    EnergyBound { index: usize, energy: f64, bound: f64 },
    #[error("index {index}: outer ball energy {energy:e} does not exceed the level {level:e}")]
    NoConcentration { index: usize, energy: f64, level: f64 },
    #[error("index {index}: complement energy {value:e} at the largest admissible radius is above the level {level:e}")]
    LevelNotReached { index: usize, value: f64, level: f64 },
    #[error("index {index}: refined center moved {shift:e}, more than the lattice spacing {spacing:e}")]
    CenterGridTooCoarse { index: usize, shift: f64, spacing: f64 },
    #[error("chart bounds exceeded: {0}")]
    ChartBounds(String),
    #[error("tree depth exceeds the maximum {0}")]
    MaxDepth(usize),
    #[error("bubble energy not computable: {0}")]
    NonComputable(String),
    #[error("degenerate annulus: inner radius {inner:e} is not below outer radius {outer:e}")]
    DegenerateAnnulus { inner: f64, outer: f64 },
    #[error(transparent)]
    Field(#[from] fields::FieldError),
}

pub type Result<T> = std::result::Result<T, BubbleError>;

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}
