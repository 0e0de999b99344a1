//! The boundary plane of the strip picture.
//!
//! With `E = e1 + e2` as the point at infinity, `e1` as the real axis and `v1` as
//! the imaginary axis, every spacelike lattice vector is a circle or a line and
//! every lightlike one a point. [`BoundaryFrame`] computes those pictures
//! exactly; [`MoebiusMap`] carries the matching action of rotations and
//! translations on the complex plane.

mod complex;
mod frame;
mod moebius;
mod shape;

pub use complex::Complex;
pub use frame::{
    boundary_distance, circle_of, plane_gap, point_line_distance, point_of, tangency_point,
    BoundaryCircle, BoundaryFrame, BoundaryPoint, CircleShape, LineData, Surd, DELTA,
};
pub use moebius::{sigma_n21, GlideAxis, MoebiusMap, Orientation};
pub use shape::{invert_point, FloatShape, STD_GRAM};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("vector is lightlike or timelike where a circle was expected (v.v = {0})")]
    NotSpacelike(String),
    #[error("vector is not lightlike (v.v = {0})")]
    NotLightlike(String),
    #[error("the point is the point at infinity (A.E = 0)")]
    AtInfinity,
    #[error("vector is not a line (v.E = {0})")]
    NotLine(String),
    #[error("vectors are not tangent (u.v = {0})")]
    NotTangent(String),
    #[error("values from incompatible number fields")]
    Field,
    #[error("coincident endpoints")]
    Coincident,
    #[error("degenerate map: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Catalog(#[from] isometry_catalog::CatalogError),
}
