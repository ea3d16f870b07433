//! Plain-text exchange format for cross-product tables.
//!
//! A table is a TOML document listing the nonzero components of the
//! calibration form α_P on 1-based, strictly increasing multi-indices:
//!
//! ```toml
//! dimension = 7
//! fold = 2
//! kind = "G2"
//!
//! [[components]]
//! index = [1, 2, 3]
//! value = 1.0
//! ```
//!
//! Loading does not check the axioms; run
//! [`CrossProduct::axiom_defect`](crate::CrossProduct::axiom_defect) before use.

use serde::{Deserialize, Serialize};

use crate::calibration::Calibration;
use crate::cross::{CrossProduct, VcpKind};
use crate::{Result, VcpError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableDoc {
    pub dimension: usize,
    pub fold: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub components: Vec<Component>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub index: Vec<usize>,
    pub value: f64,
}

impl TableDoc {
    pub fn from_cross_product(p: &CrossProduct) -> Self {
        let components = p
            .calibration()
            .nonzero_terms()
            .into_iter()
            .map(|(idx, value)| Component { index: idx.iter().map(|i| i + 1).collect(), value })
            .collect();
        TableDoc { dimension: p.dim(), fold: p.fold(), kind: Some(p.kind().name().to_string()), components }
    }

    pub fn to_cross_product(&self) -> Result<CrossProduct> {
        let kind = match &self.kind {
            Some(s) => VcpKind::parse(s).ok_or_else(|| VcpError::Table(format!("unknown kind {s:?}")))?,
            None => infer_kind(self.dimension, self.fold)?,
        };
        if kind.fold(self.dimension) != Some(self.fold) {
            return Err(VcpError::IllegalPairing { kind, n: self.dimension });
        }
        let mut terms = Vec::with_capacity(self.components.len());
        for c in &self.components {
            if c.index.iter().any(|&i| i == 0) {
                return Err(VcpError::Table(format!("indices are 1-based: {:?}", c.index)));
            }
            if !c.index.windows(2).all(|w| w[0] < w[1]) {
                return Err(VcpError::Table(format!("index {:?} not strictly increasing", c.index)));
            }
            terms.push((c.index.iter().map(|i| i - 1).collect(), c.value));
        }
        let alpha = Calibration::from_terms(self.dimension, self.fold + 1, &terms)?;
        CrossProduct::from_calibration(kind, &alpha)
    }
}

fn infer_kind(n: usize, fold: usize) -> Result<VcpKind> {
    [VcpKind::G2, VcpKind::Spin7, VcpKind::HodgeStar, VcpKind::Complex]
        .into_iter()
        .find(|k| k.fold(n) == Some(fold))
        .ok_or_else(|| VcpError::Table(format!("no cross product of fold {fold} on R^{n}")))
}

pub fn export(p: &CrossProduct) -> String {
    toml::to_string(&TableDoc::from_cross_product(p)).expect("table serializes")
}

pub fn import(text: &str) -> Result<CrossProduct> {
    let doc: TableDoc = toml::from_str(text).map_err(|e| VcpError::Table(e.to_string()))?;
    doc.to_cross_product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_all_builtins() {
        for (kind, n) in [(VcpKind::HodgeStar, 3), (VcpKind::Complex, 4), (VcpKind::G2, 7), (VcpKind::Spin7, 8)] {
            let p = CrossProduct::builtin(kind, n).unwrap();
            assert_eq!(import(&export(&p)).unwrap(), p);
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(import("dimension = 7").is_err());
        let bad = "dimension = 7\nfold = 2\n[[components]]\nindex = [0, 1, 2]\nvalue = 1.0\n";
        assert!(import(bad).is_err());
        let bad = "dimension = 6\nfold = 2\n[[components]]\nindex = [1, 2, 3]\nvalue = 1.0\n";
        assert!(import(bad).is_err());
    }
}
