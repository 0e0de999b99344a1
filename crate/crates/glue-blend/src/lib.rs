//! New packing groups built from the lattice presets.
//!
//! Everything here works in one shared frame of inversive coordinates so that
//! generators from different lattices can be combined: [`embed_standard`]
//! carries `Lambda_n` into it. A [`BlendedGroup`] is then grown by moving a
//! wall ([`shift_wall`]), gluing two strips along a common wall ([`glue`]) or
//! filling/reflecting across a ghost circle ([`slice`]). Sources are looked up
//! by name through the [`registry`].

mod blend;
mod compat;
mod embed;
mod strategy;

use thiserror::Error;

pub use blend::{
    ghost_face, glue, normalize_face, reflection_in, shift_wall, shifted_mirror, slice, slice_ghost, BlendGenerator, BlendedGroup,
    Face, Join, Side, SliceMode, SliceRejection,
};
pub use compat::{check_compatibility, curvature_integrality, overlap_search, AngleIssue, CompatibilityReport, SampleOutcome};
pub use embed::{
    embed_standard, pulled_back_gram, sqrt_std, standard_gram, standard_infinity, std_dot, vertical_line, Embedding,
    Std,
};
pub use strategy::{registry, BlendDescriptor, FaceSpec, GroupSource, Number, Registry, SliceSpec, SourceSpec};

#[derive(Debug, Error)]
pub enum BlendError {
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("arithmetic: {0}")]
    Arith(String),
    #[error(transparent)]
    Catalog(#[from] isometry_catalog::CatalogError),
    #[error(transparent)]
    Orbit(#[from] orbit_engine::OrbitError),
    #[error("preset n = {0} has no generator {1}")]
    MissingGenerator(String, String),
    #[error("slice rejected: {0}")]
    Rejected(SliceRejection),
    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),
    #[error("descriptor: {0}")]
    Descriptor(String),
}
