//! Low-latency single-channel speech enhancement with a filter-bank equalizer.
//!
//! The signal is analyzed by a GDFT filterbank at high spectral resolution,
//! a gain is estimated for every subband and frame, and those gains are mapped
//! to a short linear-phase time-domain filter. The input is then filtered
//! directly in the time domain (through overlap-save), so the signal path only
//! pays the group delay of the short filter instead of a long synthesis window.
//!
//! Module layout follows the processing chain:
//!
//! * [`filterbank`] designs the prototype filter and computes subband frames.
//! * [`gains`] estimates subband gains (MMSE-LSA) or loads them from FBEG files.
//! * [`equalizer`] turns gains into short filters and runs the streaming engine.
//! * [`metrics`] implements segmental noise attenuation, segmental SNR and the
//!   RI+Mag spectral distance.
//! * [`audio_io`] reads and writes WAV files and mixes noise at a target SNR.
//! * [`config`] holds the flat `key = value` run configuration.

// Parameter checks are written `!(x > 0.0)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audio_io;
pub mod config;
pub mod equalizer;
mod error;
pub mod filterbank;
pub mod gains;
pub mod metrics;

pub use error::{Error, Result};
pub use rustfft::num_complex::Complex64;
