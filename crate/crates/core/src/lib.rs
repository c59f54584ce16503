//! Signal-processing toolkit for eye-tracking recordings.
//!
//! The crate covers the whole fixation-analysis chain:
//!
//! * [`filters`]: Savitzky-Golay, Butterworth and windowed-sinc FIR low-pass
//!   design, stability checks, causal and zero-phase application.
//! * [`spectral`]: radix-2 FFT, block amplitude spectra, analytic and
//!   ratio-method frequency responses, dB-crossing detection.
//! * [`kinematics`]: six-point and instantaneous velocity, quiet-segment
//!   selection and block splitting.
//! * [`stats`]: autocorrelation, Fisher-Z, Friedman test and Tukey HSD on
//!   Friedman mean ranks.
//! * [`io`], [`synth`], [`config`]: recording CSV format, synthetic signal
//!   generation and pipeline defaults.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod filters;
pub mod io;
pub mod kinematics;
pub mod spectral;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
