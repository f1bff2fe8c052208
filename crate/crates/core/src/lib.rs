//! Simulation and optimization of finite-time quantum battery charging.
//!
//! - [`quantum`]: dense operators, states, evolution, partial traces and
//!   Fubini-Study geometry.
//! - [`ergotropy`]: passive and maximally active states, ergotropy, capacity
//!   and majorization.
//! - [`qubit`]: the analytic power-optimal single-qubit protocol.
//! - [`array`]: parallel versus global charging of `N`-qubit arrays and
//!   quantum speed limits.
//! - [`control`]: numerical minimization of the full-charging time over
//!   spectrally bounded Hamiltonians.

pub mod error;
pub mod array;
pub mod control;
pub mod ergotropy;
pub mod quantum;
pub mod qubit;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
