use fields::QuadratureRule;
use serde::{Deserialize, Serialize};

use crate::{BubbleError, Result};

/// Graded spherical quadrature: `radial` × `polar` × `azimuthal` nodes with
/// radius r = R·t^grading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereRule {
    pub radial: usize,
    pub polar: usize,
    pub azimuthal: usize,
    pub grading: f64,
}

impl SphereRule {
    pub fn rule(&self) -> QuadratureRule {
        QuadratureRule::Spherical {
            radial: self.radial,
            polar: self.polar,
            azimuthal: self.azimuthal,
            grading: self.grading,
        }
    }
}

/// Thresholds, resolutions and tolerances of the bubble pipeline. Energies
/// are bare.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BubbleConfig {
    /// Concentration threshold; detected masses are at least eps0/2.
    pub eps0: f64,
    /// Level of the complement energy that fixes each rescaling.
    pub eta0: f64,
    /// Gap surrogate bounding the annular energy in the ratio audit.
    pub gamma1: f64,
    /// Sequence indices, increasing.
    pub ladder: Vec<usize>,
    /// Cells per axis of the measure grid.
    pub grid: usize,
    /// Largest ball radius of the concentration scan.
    pub scan_radius: f64,
    /// Number of halvings of the scan radius.
    pub scan_levels: usize,
    /// Largest number of candidates examined per sequence.
    pub candidates: usize,
    /// Deepest octree refinement of a measure cell.
    pub octree_depth: usize,
    /// Absolute octree tolerance, relative to the declared energy bound.
    pub octree_tol: f64,
    /// Center lattice points per axis over D₃.
    pub lattice: usize,
    /// Rule for ball energies that enter records and masses.
    pub fine: SphereRule,
    /// Rule for the smoothed lattice scan.
    pub coarse: SphereRule,
    /// Admissible |F(λ) − η₀|.
    pub solver_tol: f64,
    /// Admissible undershoot of scanned complements below η₀.
    pub certify_tol: f64,
    /// Relative tolerance of quadrature comparisons.
    pub quadrature_tol: f64,
    /// Base-map energy allowed in B(2ε_k) is base_budget/k².
    pub base_budget: f64,
    /// Largest boundary-image diameter in the annulus ratio regime.
    pub injectivity: f64,
    /// Half-width of the rescaled chart box.
    pub chart_extent: f64,
    /// Levels of bubbles below the root.
    pub max_depth: usize,
    /// Radii sampled across each neck annulus.
    pub neck_radii: usize,
    /// Relative tolerance of the per-node energy balance.
    pub audit_tol: f64,
    /// Bound on the extrapolated neck diameter.
    pub diameter_tol: f64,
    /// Bound on the endpoint mismatch.
    pub endpoint_tol: f64,
    /// Bound on sup|dũ| for bubbles below eps0.
    pub gap_tol: f64,
}

/// Bare energy of the round S³ identity, 3√3·2π².
pub const SPHERE_MASS: f64 = 6.0 * 1.7320508075688772 * std::f64::consts::PI * std::f64::consts::PI;

impl Default for BubbleConfig {
    fn default() -> Self {
        Self {
            eps0: 0.5 * SPHERE_MASS,
            eta0: 1.0,
            gamma1: 20.0,
            ladder: vec![8, 16, 32, 64],
            grid: 48,
            scan_radius: 0.5,
            scan_levels: 4,
            candidates: 8,
            octree_depth: 12,
            octree_tol: 1e-7,
            lattice: 9,
            fine: SphereRule { radial: 48, polar: 16, azimuthal: 32, grading: 3.0 },
            coarse: SphereRule { radial: 16, polar: 8, azimuthal: 16, grading: 2.0 },
            solver_tol: 1e-6,
            certify_tol: 1e-3,
            quadrature_tol: 1e-2,
            base_budget: 1.0,
            injectivity: 1.0,
            chart_extent: 2.0,
            max_depth: 3,
            neck_radii: 12,
            audit_tol: 0.02,
            diameter_tol: 1e-2,
            endpoint_tol: 1e-3,
            gap_tol: 1e-6,
        }
    }
}

impl BubbleConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(BubbleError::InvalidConfig(msg));
        if !(self.eps0 > 0.0 && self.gamma1 > 0.0) {
            return bad(format!("eps0 = {}, gamma1 = {}", self.eps0, self.gamma1));
        }
        let cap = (self.eps0 / 3.0).min(self.gamma1) / 16.0;
        if !(self.eta0 > 0.0 && self.eta0 < cap) {
            return bad(format!("eta0 = {} must lie in (0, {cap})", self.eta0));
        }
        if self.ladder.len() < 4 {
            return Err(BubbleError::LadderTooShort { got: self.ladder.len(), min: 4 });
        }
        if self.ladder.windows(2).any(|w| w[0] >= w[1]) || self.ladder[0] == 0 {
            return bad(format!("ladder {:?} is not positive and increasing", self.ladder));
        }
        if self.lattice < 3 || self.lattice % 2 == 0 {
            return bad(format!("lattice {} must be odd and at least 3", self.lattice));
        }
        if self.grid < 4 || self.scan_levels < 2 || self.candidates == 0 || self.neck_radii < 2 {
            return bad("grid, scan levels, candidates or neck radii too small".into());
        }
        for rule in [self.fine, self.coarse] {
            if rule.radial == 0 || rule.polar == 0 || rule.azimuthal == 0 || !(rule.grading >= 1.0) {
                return bad(format!("sphere rule {rule:?}"));
            }
        }
        let positive = [
            self.scan_radius,
            self.octree_tol,
            self.solver_tol,
            self.certify_tol,
            self.quadrature_tol,
            self.base_budget,
            self.injectivity,
            self.chart_extent,
            self.audit_tol,
            self.diameter_tol,
            self.endpoint_tol,
            self.gap_tol,
        ];
        if positive.iter().any(|v| !(*v > 0.0)) {
            return bad("radii and tolerances must be positive".into());
        }
        Ok(())
    }
}
