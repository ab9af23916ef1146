//! Exact linear algebra over GF(2) and over the integers/rationals.

pub mod gf2;
pub mod integer;

pub use gf2::{Gf2Matrix, Gf2Vector};
pub use integer::{int_kernel_vector, primitive_integer_vector, rational_rref, IntMatrix, IntVector};
