//! Filter design and application: Kaiser-window FIR low-pass filters and
//! Butterworth second-order-section IIR filters with zero-phase application.

mod butterworth;
mod fir;

pub use butterworth::{Butterworth, FilterKind, Sos};
pub use fir::{convolve_same, kaiser_lowpass, KaiserLowpass};
