//! Charge-density-wave soliton transport laboratory.
//!
//! * [`model`]: constants and potentials
//! * [`evolver`]: single-chain amplitude evolution on a phase grid
//! * [`sine_gordon`]: pendulum chain, kink solution and thin-wall profile
//! * [`variational`]: two-chain Gaussian-comb ground state and Θ sweeps
//! * [`tunneling`]: closed-form tunneling current and Fourier checks
//! * [`config`] and [`run`]: the `cdw-lab` command-line front end

// `!(a < b)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod evolver;
pub mod model;
pub mod quadrature;
pub mod run;
pub mod simplex;
pub mod sine_gordon;
pub mod special;
pub mod table;
pub mod tunneling;
pub mod variational;

pub use error::{CdwError, Result};
pub use model::{FieldDriveParams, PhysicalParams};
pub use table::CurveTable;
