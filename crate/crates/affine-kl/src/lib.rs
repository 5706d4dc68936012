//! Characters of irreducible highest-weight modules over affine and
//! finite-type Lie algebras with arbitrary non-critical highest weights.
//!
//! The pipeline: extract the integral root subsystem of a weight, realize
//! its integral Weyl group as an explicit Coxeter group, evaluate
//! (inverse) Kazhdan-Lusztig polynomials over Bruhat intervals, and
//! assemble the truncated character of `L(lambda)` as a signed sum of
//! Verma characters. Every computation is exact over Q(sqrt 2); a
//! brute-force Shapovalov-form oracle certifies weight-space dimensions
//! at small depth.

pub mod base;
pub mod character;
pub mod cli;
pub mod coxeter;
pub mod error;
pub mod hecke;
pub mod integral;
pub mod kl;
pub mod shapovalov;
pub mod simplex;

pub use base::{CartanData, Root, Scalar, Weight};
pub use error::{Error, Result};
pub use integral::{ChamberClass, IntegralSystem};
