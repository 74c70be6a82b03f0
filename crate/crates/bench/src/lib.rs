//! Fixtures shared by the benchmarks.

use ekp_core::{catalog_entry, CatalogEntry, Point};

pub fn entry(name: &str) -> CatalogEntry {
    catalog_entry(name).expect("built-in catalog entry")
}

pub fn unit(entry: &CatalogEntry) -> Point {
    entry.unit.clone().expect("entry has a unit")
}
