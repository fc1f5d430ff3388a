//! Wideband beamspace mmWave MIMO simulation.
//!
//! The crate is organised bottom-up:
//!
//! - [`channel`]: multipath sampling, per-subcarrier spatial channels and their
//!   beamspace (lens array) representation, including beam squint.
//! - [`selection`]: energy-max transmit/receive beam selection, beam budget
//!   sizing and an exhaustive-search reference for small instances.
//! - [`precoding`]: the successive-interference-cancellation design of the
//!   block-diagonal phase-shifter precoder, baseband precoders and the SVD
//!   baselines.
//! - [`metrics`]: mutual information, complexity counts, power and energy
//!   efficiency.
//! - [`runner`]: configuration, seeded Monte Carlo sweeps and CSV output.
//!
//! All matrices are dense `nalgebra` matrices over `Complex64`.

pub mod channel;
pub mod cli;
pub mod dump;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod precoding;
pub mod runner;
pub mod selection;
pub mod stats;

pub use error::{Error, Result};
pub use linalg::{CMat, CVec};
