//! Coherent superposition of vacuum-extended quantum channels.
//!
//! Sending a target system through a superposition of noisy links, then
//! measuring the path register, can leave the target entangled even when each
//! link on its own destroys entanglement. This crate simulates that process
//! with dense density matrices and provides the figures of merit (fidelity,
//! concurrence), closed-form reference values, scenario sweeps and an
//! amplitude optimizer.

pub mod channels;
pub mod dtqw;
pub mod error;
pub mod metrics;
pub mod numerics;
pub mod scenarios;
pub mod superposition;

pub use error::{Error, Result};
