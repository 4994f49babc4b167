//! Exact symbolic curvature for left-invariant metrics on Lie groups carrying
//! a circulant structure.
//!
//! The crate builds, from Lie algebra structure constants with named rational
//! parameters, the Levi-Civita connection, the full curvature tensor, Ricci
//! and scalar curvature, the almost-product structure data of a circulant
//! endomorphism, and canonical polynomial constraint sets encoding geometric
//! properties (curvature invariance under the structure, class membership,
//! Einstein, constant curvature). Everything is exact: coefficients are
//! rational functions of the parameters, and every property check is a
//! polynomial identity, never a numeric tolerance.
//!
//! A narrative guide lives in `book/`; its code snippets are compiled as
//! doc-tests of this crate, so guide and library cannot drift apart.

// Tensor kernels walk several arrays with shared indices; explicit index
// loops keep the index bookkeeping visible.
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod constraints;
pub mod exactnum;
pub mod geometry;
pub mod liealg;
pub mod structures;

#[cfg(doctest)]
mod booktests;
