//! Tallest self-supporting column.
//!
//! The optimal tapering `a(s)` of a column that carries only its own weight
//! is governed by a singular boundary value problem. This crate removes the
//! tip singularity with the exact similarity solution, turns the remaining
//! equations into an autonomous system, and shoots backward along the
//! one-dimensional stable manifold of its critical point until the base
//! boundary condition is met. The buckling load `λ` falls out of the stopping
//! point.
//!
//! An independent finite-difference Sturm–Liouville solver ([`oracle`])
//! recomputes `λ` for the reconstructed shape and checks the optimality and
//! torque-balance identities.
//!
//! ```
//! use tallest_column::{integrate_backward, BoundaryKind, ShootingOptions};
//!
//! let sol = integrate_backward(BoundaryKind::Clamped, &ShootingOptions::default()).unwrap();
//! assert!((sol.lambda - 134.19).abs() < 0.2);
//! ```

// NaN must fail validation, so guards are written as negated comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
mod error;
pub mod integrator;
pub mod linearize;
pub mod oracle;
pub mod quadrature;
pub mod reconstruct;
pub mod shooting;
pub mod similarity;

pub use dynamics::{event_residual, initial_state, rhs, AsState, AutonomousSystem};
pub use error::{Error, Result};
pub use linearize::{characteristic_roots, eigenmode, stable_mode, stability_matrix, Eigenmode};
pub use oracle::{
    optimality_residual, stationarity_check, sturm_liouville_lambda, torque_residual,
    DiscreteShape,
};
pub use reconstruct::{dimensional_design, profile, volume, ColumnProfile, MaterialSpec};
pub use shooting::{
    integrate_backward, lambda_sensitivity, BoundaryKind, ShootingOptions, Solution,
};
pub use similarity::{admissible_exponent, similarity_profile, SimilarityExponents};
