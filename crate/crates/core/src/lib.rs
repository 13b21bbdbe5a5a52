//! Zero-noise extrapolation under time-correlated dephasing.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arma;
pub mod error;
pub mod filter;
pub mod harness;
pub mod monte_carlo;
pub mod quantum;
pub mod rng;
pub mod scaling;
pub mod zne;
pub mod zoo;

pub use error::{Error, Result};
