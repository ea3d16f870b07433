use fields::Point;

use crate::{BubbleConfig, BubbleTree};

/// τ_I = m_I − (E(ũ_{∞,I}) + Σ m_child) for one bubble node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeBalance {
    pub level: usize,
    pub point: Option<Point>,
    pub mass: f64,
    pub bubble_energy: f64,
    pub children_mass: f64,
    pub tau: f64,
    /// −tol ≤ τ ≤ η₀ + tol with tol = quadrature_tol·m.
    pub bracketed: bool,
    /// |τ| ≤ audit_tol·m.
    pub balanced: bool,
}

/// Per-node balances and the global comparison of lim E(u_n) with
/// E(u_∞) + Σ E(ũ_{∞,I}).
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLedger {
    pub nodes: Vec<NodeBalance>,
    pub limit_energy: f64,
    pub base_energy: f64,
    pub bubble_energy: f64,
}

impl EnergyLedger {
    /// lim E(u_n) − (E(u_∞) + Σ E(ũ_{∞,I})).
    pub fn defect(&self) -> f64 {
        self.limit_energy - self.base_energy - self.bubble_energy
    }

    pub fn passed(&self) -> bool {
        self.nodes.iter().all(|n| n.bracketed && n.balanced)
    }
}

pub fn energy_accounting(tree: &BubbleTree, config: &BubbleConfig) -> EnergyLedger {
    let nodes: Vec<NodeBalance> = tree
        .root
        .descendants()
        .into_iter()
        .map(|n| {
            let children_mass = n.children_mass();
            let tau = n.mass - n.energy - children_mass;
            let tol = config.quadrature_tol * n.mass;
            NodeBalance {
                level: n.level,
                point: n.point,
                mass: n.mass,
                bubble_energy: n.energy,
                children_mass,
                tau,
                bracketed: -tol <= tau && tau <= config.eta0 + tol,
                balanced: tau.abs() <= config.audit_tol * n.mass,
            }
        })
        .collect();
    let bubble_energy = nodes.iter().map(|n| n.bubble_energy).sum();
    EnergyLedger { nodes, limit_energy: tree.root.mass, base_energy: tree.root.energy, bubble_energy }
}
