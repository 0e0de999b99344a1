//! Isometries of `Lambda_n` and the generator presets of the packing groups.
//!
//! The presets are data ([`Catalog::embedded`] reads `data/catalog.json`); each is
//! verified on load and rows tagged with a general construction are compared
//! against it.

mod catalog;
mod isometry;

pub use catalog::{
    general_s1_s2, glide_n21, q1_formula, CData, Catalog, CatalogError, CatalogFile, Discrepancy, Entry,
    GenRecord, Generator, GeneratorPreset, PresetRecord, Provenance,
};
pub use isometry::{
    check_symmetry, preserves, verify_symmetry, Isometry, IsometryError, IsometryKind, SymmetryReport,
};
