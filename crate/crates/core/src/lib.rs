//! Executable diagram chasing for finite double (and triple) complexes of
//! finite-dimensional vector spaces, with exact arithmetic.
//!
//! The library represents a double complex as a finite grid of dimensions
//! plus differential matrices over GF(p) or the rationals, computes the
//! donor/receptor/homology subquotients at every position, builds the
//! intramural and extramural maps between them as explicit matrices, and
//! assembles the classical long-distance morphisms (snake connecting maps,
//! sharp 3x3, long exact sequences, total homology) out of those short
//! steps, verifying every claimed exactness and isomorphism along the way.

pub mod corners;
pub mod error;
pub mod exactlin;
pub mod grid;
pub mod nfold;
pub mod construct;
pub mod report;
pub mod textio;
pub mod theorems;
pub mod total;

pub use error::{Error, Result};
pub use exactlin::{FieldSpec, Matrix, Scalar, Subquotient, SubquotientMap, Subspace};
pub use grid::{ComplexBuilder, Direction, DoubleComplex, Position, Side};
