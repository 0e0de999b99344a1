//! Orbit enumeration for circle packings given by reflection-type groups.
//!
//! A group is described by an [`OrbitGroup`]: a Gram matrix, the null vector
//! `E` taken as the point at infinity, generators, and two parallel wall
//! reflections. Orbits are enumerated breadth first modulo the wall group,
//! then checked for the packing, tangency and Apollonian properties.

mod checks;
mod enumerate;
mod group;
mod oracle;
mod scalar;

pub use checks::{
    check_apollonian_property, check_packing_property, tangency_graph, transitivity_check, ApollonianReport,
    CircleStatus, PackingReport, PairViolation, TangencyGraph, Vertex,
};
pub use enumerate::{enumerate_orbit, Letter, Member, OrbitConfig, Packing};
pub use group::{lattice_chart, GroupGenerator, GroupSpec, OrbitError, OrbitGroup};
pub use oracle::{admissible, direct_search};
pub use scalar::OrbitScalar;
