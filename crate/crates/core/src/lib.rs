//! Exact Wedderburn-Artin decomposition of finite-dimensional semisimple
//! algebras over prime fields.
//!
//! An algebra is given by structure constants. The pipeline certifies
//! semisimplicity, splits the identity into orthogonal primitive
//! idempotents, groups them into equivalence classes, builds central
//! idempotents and matrix units, and assembles an explicit isomorphism
//! `A -> M_{n_1}(D_1) x ... x M_{n_r}(D_r)` that can be re-verified from its
//! serialized form alone.

pub mod algebra;
pub mod document;
pub mod error;
pub mod exactfield;
pub mod generators;
pub mod idempotents;
pub mod semisimple;
pub mod wedderburn;

pub use error::{Error, Result};
