//! Congruence witness synthesis for matrix tuples and multilinear maps.
//!
//! Given a two-sided witness `(P, R)` with `P A_i Rᵀ = R A_i Pᵀ = B_i`, the
//! [`tuple::symmetrize_witness`] routine produces a single nonsingular `S`
//! with `S A_i Sᵀ = B_i`. The construction runs entirely through polynomial
//! functional calculus: a primary decomposition of `R⁻¹P`, a confluent
//! Hermite interpolant of a branch of `z^{1/2}`, and one matrix product.
//! The [`multilinear`] module carries the same idea to `k`-linear maps by
//! merging the per-slot bijections one at a time.
//!
//! The crate is `no_std` and only needs `alloc`. IO, file formats and the
//! command line front end live in the `congforge` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod generate;
pub mod mat;
pub mod multilinear;
pub mod numerics;
pub mod report;
pub mod roots;
pub mod scalar;
pub mod tuple;

pub use error::{Error, Result};
pub use mat::Mat;
pub use numerics::poly::Polynomial;
pub use numerics::spectral::SpectralData;
pub use report::{ResidualEntry, ResidualReport};
pub use roots::{BranchRule, RootResult};
pub use scalar::{Scalar, Tolerance};
