//! Exact number types for lattice geometry.
//!
//! [`Rational`] wraps an arbitrary-precision fraction, [`QuadElem`] is an element
//! of a real quadratic field `Q(sqrt d)`, and [`BiQuadElem`] lives in
//! `Q(sqrt d1, sqrt d2)`. All three implement [`Scalar`], the ordered-ring
//! interface used by the orbit engine, and share exact sign computation.

mod biquad;
mod error;
mod float;
mod quad;
mod rational;
mod scalar;
mod squarefree;

pub use biquad::BiQuadElem;
pub use error::ArithError;
pub use float::to_float;
pub use quad::{quad_mul, quad_sign, QuadElem};
pub use rational::Rational;
pub use scalar::{Field, Scalar};
pub use squarefree::{isqrt, squarefree_split};

pub use num_bigint::BigInt;
