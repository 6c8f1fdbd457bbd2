//! Bundled curve definitions, stored as data files.

use crate::error::{Error, Result};
use crate::expr::{parse_curve_file, CurveDef};

pub struct CatalogEntry {
    pub name: &'static str,
    pub source: &'static str,
}

/// All bundled curves; the first five are the comparison-table rows.
pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "lemniscate",
        source: include_str!("../curves/lemniscate.curve"),
    },
    CatalogEntry {
        name: "trefoil",
        source: include_str!("../curves/trefoil.curve"),
    },
    CatalogEntry {
        name: "viviani",
        source: include_str!("../curves/viviani.curve"),
    },
    CatalogEntry {
        name: "torus-knot",
        source: include_str!("../curves/torus-knot.curve"),
    },
    CatalogEntry {
        name: "spherical-spiral",
        source: include_str!("../curves/spherical-spiral.curve"),
    },
    CatalogEntry {
        name: "circle-r1",
        source: include_str!("../curves/circle-r1.curve"),
    },
    CatalogEntry {
        name: "sphere-circle-r03",
        source: include_str!("../curves/sphere-circle-r03.curve"),
    },
    CatalogEntry {
        name: "sphere-circle-r06",
        source: include_str!("../curves/sphere-circle-r06.curve"),
    },
    CatalogEntry {
        name: "sphere-circle-r09",
        source: include_str!("../curves/sphere-circle-r09.curve"),
    },
];

/// Names of the five comparison-table curves, in row order.
pub const TABLE_CURVES: [&str; 5] = [
    "lemniscate",
    "trefoil",
    "viviani",
    "torus-knot",
    "spherical-spiral",
];

pub fn lookup(name: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|entry| entry.name == name)
}

pub fn load(name: &str) -> Result<CurveDef> {
    let entry = lookup(name).ok_or_else(|| {
        let names: Vec<&str> = CATALOG.iter().map(|e| e.name).collect();
        Error::Domain(format!(
            "unknown catalog curve `{name}`; available: {}",
            names.join(", ")
        ))
    })?;
    parse_curve_file(entry.source)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_parses_and_matches_its_name() {
        for entry in CATALOG {
            let curve = parse_curve_file(entry.source).unwrap();
            assert_eq!(curve.name, entry.name);
        }
    }

    #[test]
    fn names_are_unique() {
        for (i, a) in CATALOG.iter().enumerate() {
            for b in &CATALOG[i + 1..] {
                assert_ne!(a.name, b.name);
            }
        }
    }

    #[test]
    fn table_curves_resolve() {
        for name in TABLE_CURVES {
            assert!(lookup(name).is_some());
        }
    }

    #[test]
    fn unknown_name_lists_alternatives() {
        let err = load("klein-bottle").unwrap_err();
        let text = err.to_string();
        assert!(text.contains("klein-bottle"));
        assert!(text.contains("lemniscate"));
    }
}
