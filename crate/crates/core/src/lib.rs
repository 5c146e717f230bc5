//! Self-similarity analysis of network-induced delay traces.
//!
//! The crate is `no_std` and needs only `alloc`. It covers:
//!
//! * time-domain statistics of a trace ([`series`]),
//! * raw periodogram and Welch spectra ([`spectral`]),
//! * eight Hurst-parameter estimators ([`hurst`]),
//! * exact fractional Gaussian noise synthesis ([`synthesis`]),
//! * moving-average, Savitzky-Golay and Gaussian-kernel smoothers ([`smoothing`]),
//! * one-group point-kinetics with a stale-sample delay channel ([`reactor`]),
//! * the smoother-vs-fractional-order benchmark ([`benchmark`]).
//!
//! File formats, threading and the command-line front end live in the
//! companion `selfsim` crate.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod benchmark;
pub mod error;
pub mod fft;
pub mod hurst;
mod linalg;
pub mod reactor;
pub mod series;
pub mod smoothing;
pub mod spectral;
pub mod synthesis;

pub use error::{Error, Result};
pub use series::{SummaryStats, TimeSeries};
