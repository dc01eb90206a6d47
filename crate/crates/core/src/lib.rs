//! Numerical workbench for unit-speed curves in contact metric manifolds.
//!
//! A manifold is described by an orthonormal moving frame with explicit
//! connection coefficients, the structure tensor φ, the Reeb direction ξ and
//! the tensor h, all given as coordinate expressions (or constants for
//! homogeneous models). On top of that the crate computes Frenet apparatus
//! of sampled unit-speed curves, the four mean-curvature derivative vectors
//! ∇_T H, ΔH, ∇⊥_T H, Δ⊥H, and decides whether a curve satisfies the
//! C-parallel / C-proper conditions `V = λξ`, together with verifiers for
//! the associated curvature characterizations.

// Tensor arithmetic reads clearest with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod classifier;
pub mod constructor;
pub mod curve;
pub mod error;
pub mod exprdsl;
pub mod manifold;
pub mod meancurvature;
pub mod numerics;

pub mod cli;

pub use error::{Error, Result};
