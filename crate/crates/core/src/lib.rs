//! Single-spin detection through a superconducting microwave resonator.
//!
//! The crate covers the whole chain: spin Hamiltonians and their coupling to
//! the resonator, nanowire device design, the effective and full master
//! equations, stochastic homodyne records, and discrimination of "spin" vs
//! "no spin" by integrated-signal thresholding or a Bayesian filter.

pub mod cli;
pub mod config;
pub mod detection;
pub mod device;
pub mod dynamics;
pub mod error;
pub mod numerics;
pub mod spin;

pub use error::{Error, Result};
