//! The lattice `Lambda_n`: Gram form, products, norms and the fixed frame.

pub mod linalg;
mod form;
mod search;
mod vector;

pub use form::{FrameVectors, GramForm, LorentzError};
pub use search::{mod8_obstruction, represents_norm};
pub use vector::{lorentz_product, norm_class, primitive_reduce, LatticeVector, NormClass};
