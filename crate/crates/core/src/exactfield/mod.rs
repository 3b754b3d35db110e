//! Exact arithmetic substrate: prime fields, dense matrices, polynomials
//! and Berlekamp factorization.

pub mod berlekamp;
pub mod field;
pub mod matrix;
pub mod poly;

pub use berlekamp::{berlekamp_factor, is_irreducible};
pub use field::{FieldOp, Fp, PrimeField};
pub use matrix::{Matrix, Rref, SpanBasis};
pub use poly::{bezout, Poly};
