//! Asymmetric truncated Toeplitz operators on finite-dimensional model spaces.
//!
//! A finite Blaschke product `α` of degree `m` generates an `m`-dimensional
//! model space `K_α` inside the Hardy space of the unit disk. Given two such
//! products `α`, `β` and a symbol `φ` on the unit circle, the asymmetric
//! truncated Toeplitz operator `A_φ: K_α → K_β` compresses multiplication by
//! `φ` to the pair of model spaces. This crate computes, in closed form:
//!
//! * reproducing kernels, conjugate kernels, Clark and modified Clark bases
//!   of `K_α` ([`modelspace`]);
//! * matrices of rank-one generators, symbol-defined operators, and sums of
//!   boundary kernels in any of the four basis families ([`operator`]);
//! * membership tests deciding whether a given matrix represents such an
//!   operator, and completion of a matrix from its determining entries;
//! * the dimension of the space of all these operators and bases for it;
//! * an independent verification path through FFT boundary sampling and
//!   Szegő projection ([`oracle`]).
//!
//! The `atto` binary exposes the same functionality as a JSON-in/JSON-out
//! command-line tool; the `examples/` directory walks through each major
//! capability.

pub mod blaschke;
pub mod cli;
pub mod config;
pub mod error;
pub mod json;
pub mod modelspace;
pub mod numerics;
pub mod operator;
pub mod oracle;

pub use blaschke::{BlaschkeProduct, ZeroMatching};
pub use config::ToleranceConfig;
pub use error::{Error, Result};
pub use modelspace::{BasisKind, BasisSpec, ClarkSystem, ModelVector};
pub use numerics::{CMatrix, Polynomial};
pub use operator::{AttoMatrix, BoundaryCombo, MembershipReport, SymbolPair};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
