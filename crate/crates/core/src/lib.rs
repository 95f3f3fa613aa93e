//! Riesz-weighted Pearson II matrix distributions for `beta = 1, 2, 4`
//! (scalar formulas also for `beta = 8`): special functions, densities,
//! samplers, spectral laws and numerical verification.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision, clippy::too_many_arguments)]

pub mod algebra;
pub mod cli;
pub mod densities;
pub mod error;
pub mod jack;
pub mod sampling;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
