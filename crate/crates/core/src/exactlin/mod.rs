//! Exact linear algebra over GF(p) or the rationals: matrices, canonical
//! subspaces, and subquotients with explicit coordinate maps.

pub mod field;
pub mod matrix;
pub mod subquotient;
pub mod subspace;

pub use field::{FieldSpec, Scalar};
pub use matrix::Matrix;
pub use subquotient::{compose, exact_at_middle, induced_map, Subquotient, SubquotientMap};
pub use subspace::{image, kernel, Subspace};
