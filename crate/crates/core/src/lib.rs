//! Exact symbolic models of the minimal and metaplectic representations of
//! the orthosymplectic Lie superalgebra `spo(2m|2n,2n)`, together with the
//! super Segal-Bargmann transform and the pairings that connect the
//! Schrödinger and Fock pictures.
//!
//! Everything is computed over exact scalars (Gaussian rationals extended by
//! `sqrt2` and a formal `sqrtpi`), so every identity is checked with
//! zero-tolerance structural equality rather than floating point.

pub mod scalar;
pub mod rng;
pub mod linalg;
pub mod metric;
pub mod superspace;
pub mod diffop;
pub mod gaussian;
pub mod algebra;
pub mod bessel;
pub mod reps;
pub mod products;
pub mod transforms;
pub mod report;
pub mod suites;

pub use scalar::{Rat, Scalar};
