use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Module {
    VcpSuite,
    FieldGallery,
    BubbleRun,
}

impl Module {
    pub const ALL: [Module; 3] = [Module::VcpSuite, Module::FieldGallery, Module::BubbleRun];

    pub fn tag(self) -> &'static str {
        match self {
            Module::VcpSuite => "vcp-suite",
            Module::FieldGallery => "field-gallery",
            Module::BubbleRun => "bubble-run",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.tag() == s)
    }
}

impl fmt::Display for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub module: Module,
    pub name: &'static str,
    pub summary: &'static str,
    /// Concentration points a bubble run must find; zero elsewhere.
    pub bubbles: usize,
}

const fn entry(module: Module, name: &'static str, summary: &'static str, bubbles: usize) -> Entry {
    Entry { module, name, summary, bubbles }
}

/// Builtin scenarios, ordered by module and then by name.
pub const CATALOG: &[Entry] = &[
    entry(Module::VcpSuite, "calibration-gap", "calibration gap vs Smith defect on random and mixed maps", 0),
    entry(Module::VcpSuite, "fundamental-identity", "double-product identity on random independent tuples", 0),
    entry(Module::VcpSuite, "hadamard", "Hadamard gap on random and conformal 7x3 maps", 0),
    entry(Module::VcpSuite, "vcp-axioms", "orthogonality and norm axioms of the builtin cross products", 0),
    entry(Module::FieldGallery, "associative-plane", "unit associative inclusion of the cube", 0),
    entry(Module::FieldGallery, "dilation", "associative inclusion scaled by two", 0),
    entry(Module::FieldGallery, "holo-lift", "lifts of holomorphic curves with an angular fiber", 0),
    entry(Module::FieldGallery, "mobius-precompose", "inclusion precomposed with a reflected inversion", 0),
    entry(Module::FieldGallery, "nharmonic-order", "3-harmonic residual under grid refinement", 0),
    entry(Module::FieldGallery, "reversed-inclusion", "orientation-reversed inclusion, pointwise defect", 0),
    entry(Module::FieldGallery, "s3-identity", "identity of the round 3-sphere from two stereo charts", 0),
    entry(Module::BubbleRun, "dilation-family", "smoothly converging dilations, no concentration", 0),
    entry(Module::BubbleRun, "mobius-s3", "Moebius dilations concentrating one sphere at the origin", 1),
    entry(Module::BubbleRun, "no-bubble", "constant sequence of inclusions, no concentration", 0),
    entry(Module::BubbleRun, "two-bubble", "two separated sphere bubbles in a product target", 2),
];

pub fn lookup(module: Module, name: &str) -> Option<&'static Entry> {
    CATALOG.iter().find(|e| e.module == module && e.name == name)
}

/// Entries whose module tag equals `filter`, or all entries.
pub fn list(filter: Option<&str>) -> Vec<&'static Entry> {
    CATALOG.iter().filter(|e| filter.is_none_or(|f| e.module.tag() == f)).collect()
}

pub fn render(entries: &[&Entry]) -> String {
    entries.iter().map(|e| format!("{}\t{}\t{}\n", e.module, e.name, e.summary)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_sorted_and_unique() {
        let keys: Vec<(Module, &str)> = CATALOG.iter().map(|e| (e.module, e.name)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn filters() {
        let all = list(None);
        for name in ["mobius-s3", "associative-plane", "holo-lift", "two-bubble"] {
            assert!(all.iter().any(|e| e.name == name));
        }
        let vcp = list(Some("vcp-suite"));
        assert!(!vcp.is_empty() && vcp.iter().all(|e| e.module == Module::VcpSuite));
        assert!(list(Some("nothing")).is_empty());
        assert_eq!(render(&[]), "");
        assert_eq!(Module::parse("bubble-run"), Some(Module::BubbleRun));
    }
}
