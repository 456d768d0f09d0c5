//! Local solutions and connection matrices for the general Heun equation
//! written in its symmetric form
//!
//! ```text
//! F'' + (1/2) Σ_j 1/(z - z_j) F' + (λ + Σ_j q_j/(z - z_j)) / P(z) F = 0,
//! P(z) = Π_j (z - z_j),   q_j = α_j β_j P'(z_j),   α_j + β_j = 1/2,
//! ```
//!
//! with four finite regular singular points `z_1..z_4`.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: circumcircles, Möbius maps, cross-ratios and the unit-circle
//!   frame used to position the singular points.
//! * [`series`]: the equation itself, Taylor and Frobenius local solutions
//!   generated from a mechanically derived recurrence, branch-controlled
//!   evaluation, and an independent path integrator.
//! * [`standard`]: the map onto the standard `HeunG` form with singularities
//!   at `0, 1, a, ∞`.
//! * [`connection`]: fundamental pairs, connection matrices and atlases.
//! * [`regions`]: feasibility predicates and parameter-space rasters.
//!
//! Raster scans run on rayon when the `parallel` feature (default) is enabled
//! and fall back to a sequential loop otherwise.

// `!(x <= limit)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod connection;
pub mod error;
pub mod geometry;
pub mod regions;
pub mod series;
pub mod standard;

mod exec;
mod poly;

pub use error::{Error, ErrorClass, Result};
pub use exec::Execution;

/// Double precision complex number used throughout the crate.
pub type C64 = num_complex::Complex64;
