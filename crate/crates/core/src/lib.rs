//! Exact combinatorics for totally unimodular matrices and regular matroids,
//! up to the weight-isolation construction for polytope faces.
//!
//! Every computation is exact. Scalars are generic over [`scalar::IntScalar`];
//! the aliases below fix the common choices.

pub mod error;
pub mod gen;
pub mod graphs;
pub mod isolation;
pub mod ksum;
pub mod linalg;
pub mod matroid;
pub mod scalar;
pub mod tulattice;
mod text;

pub use error::{Error, Result};
pub use graphs::{graphic_matroid, cographic_matroid, WeightedMultigraph};
pub use isolation::{build_family, fks_family, SubsetFamily, WeightFamily};
pub use linalg::{Gf2Matrix, Gf2Vector, IntMatrix, IntVector};
pub use matroid::{element_set, r10, BinaryMatroid, ElementSet, WeightFn};
pub use scalar::{Bound, IntScalar};

/// Arbitrary-precision integer matrix.
pub type ZMatrix = IntMatrix<num_bigint::BigInt>;
/// Arbitrary-precision integer vector.
pub type ZVector = IntVector<num_bigint::BigInt>;
/// Machine-word integer matrix for small inputs.
pub type ZMatrix64 = IntMatrix<i64>;
/// Machine-word integer vector for small inputs.
pub type ZVector64 = IntVector<i64>;
