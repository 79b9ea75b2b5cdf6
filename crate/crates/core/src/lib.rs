//! Pseudo-spectral laboratory for the incompressible MHD system linearised
//! around the uniform background field `e_n` on the periodic torus `T^n`.
//!
//! The crate is organised bottom-up:
//!
//! - [`spectral`]: lattice, coefficient fields, multipliers, transforms, norms
//! - [`symmetry`]: parity classes of `(u, b)` and the vertical-mode constraints
//! - [`solver`]: exact per-mode linear propagation composed with dealiased
//!   nonlinear updates
//! - [`diagnostics`]: time-weighted energy functionals, decay fits
//! - [`commutator`]: Riesz-type commutator estimates on random fields

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod commutator;
pub mod diagnostics;
pub mod error;
pub mod solver;
pub mod spectral;
pub mod symmetry;

pub use error::{Error, Result};
