//! Exact-arithmetic toolkit for trilinear (3,3,4) tensors and the
//! determinantal cubic surfaces they carry: slice maps and base points,
//! the contraction operator and cross-product involution, the Schur
//! quadric and double-six orthogonality, direct-image resolutions of
//! Eagon-Northcott type, a graded model of the rank-6 kernel bundle, and
//! Cremona reduction of divisor classes on a six-point blow-up.
//!
//! Every computation is exact: arbitrary-precision rationals or a prime
//! field with word-sized modulus. All values are immutable after
//! construction and every operation is a pure function.

pub mod bundle;
pub mod error;
pub mod fp;
pub mod generate;
pub mod lattice;
pub mod matrix;
pub mod points;
pub mod poly;
pub mod resolution;
pub mod scalar;
pub mod schur;
pub mod series;
pub mod tensor;

pub use error::{Error, Result};
pub use matrix::DenseMatrix;
pub use poly::MultiPoly;
pub use scalar::{FieldTag, Scalar};
pub use tensor::{Leg, TriTensor};
