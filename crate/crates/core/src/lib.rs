//! Simulation and signal processing for acoustic pickup through an indoor
//! telecom fiber with a heterodyne laser interferometer.
//!
//! The crate covers the whole chain:
//!
//! * [`model`]: sound pressure → fiber phase → photodiode beat note;
//! * [`noise`]: thermal and laser phase-noise PSDs, band-limited RMS,
//!   colored-noise synthesis and detection-limit budgets;
//! * [`demod`]: IQ demodulation, unwrapping, zero-phase high-pass, resampling;
//! * [`enhance`]: spectral subtraction and segmental SNR;
//! * [`sensitivity`]: strain-optic response and mitigation comparisons;
//! * [`config`] and [`io`]: the TOML run configuration and trace files.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod demod;
pub mod enhance;
pub mod error;
pub mod filter;
pub mod io;
pub mod model;
pub mod noise;
pub mod quad;
pub mod sensitivity;
pub mod spectrum;
pub mod trace;

pub use config::Config;
pub use error::{Error, Result};
pub use trace::{BasebandTrace, SampledTrace, TraceKind};
