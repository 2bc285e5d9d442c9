//! Boundary invariants and approach regions for finite-type domains in C^2.
//!
//! The crate is organised bottom-up:
//!
//! - [`symalg`]: exact polynomials in `z1, zb1, z2, zb2` with Wirtinger
//!   derivatives, rational expressions and polarization.
//! - [`crgeom`]: the tangential frame `L, Lb, T`, iterated commutators,
//!   the invariants `Lambda_k` and the type of a boundary point.
//! - [`boundary`]: normal projection, the scale `D(z)`, non-isotropic balls
//!   and the three approach-region families.
//! - [`counterexample`]: packings, the functions `g_{n,r}` and `f_n`, zero
//!   localisation and the oscillation experiment.

// `!(x > 0.0)` is used throughout to reject NaN along with the failing range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod counterexample;
pub mod crgeom;
pub mod error;
pub mod parallel;
pub mod point;
pub mod symalg;

pub use error::{Error, Result};
pub use point::C2;
