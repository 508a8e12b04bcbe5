//! Monte Carlo model of the pulsed counting experiment.
//!
//! The chain mirrors the bench: per-pulse click probabilities derived from
//! the circuit's joint photon statistics, an indistinguishability mixture
//! between correlated and independent click sampling, detector timing
//! jitter and dark counts, a multi-stop delay histogram, accumulation of
//! the coincidence peaks at multiples of the pulse period, and the
//! normalized zero-delay correlation with its uncertainty.

mod calibrate;
mod click;
mod config;
mod estimate;
mod histogram;
mod rng;
mod sampler;

pub use calibrate::{calibrate_mean_photon, sample_poisson, scan_path_delay, PathDelayPoint};
pub use click::ClickTable;
pub use config::ExperimentConfig;
pub use estimate::{estimate_g, CorrelationEstimate, GEstimates};
pub use histogram::{accumulate_peaks, build_histogram, CoincidenceHistogram, PeakCounts};
pub use sampler::{sample_pulse_train, TimeTagStream};

use core::fmt;

/// Neighbor orders covered by the histogram and peak accumulation.
pub const PEAK_ORDERS: [i32; 6] = [-1, 0, 1, 2, 3, 4];

#[derive(Clone, Debug, PartialEq)]
pub enum CountingError {
    /// A configuration field is out of range; `key` names it.
    InvalidConfig { key: &'static str, reason: &'static str },
    /// Correlated and product click tables disagree on a marginal.
    MarginalMismatch { detector: u8, correlated: f64, product: f64 },
    /// Detection efficiency would be applied on top of a joint
    /// distribution that already contains it.
    DoubleEfficiencyApplication,
    /// Click probabilities are inconsistent (outside [0,1] or violating
    /// p₁₂ ≤ min(p₁, p₂)).
    InvalidClickTable { reason: &'static str },
    /// A click-correlation denominator vanished.
    ClickDenominatorZero,
    /// Peak windows of adjacent neighbor orders would overlap.
    OverlappingWindows,
    /// A normalization peak holds zero counts.
    EmptyNormalization { m: i32 },
    /// The zero-delay peak holds zero counts; no correlation estimate.
    EmptyZeroDelayPeak,
    /// Calibration requires a positive background.
    ZeroBackground,
    /// A time-tag stream was not strictly sorted.
    UnsortedStream,
}

impl fmt::Display for CountingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountingError::InvalidConfig { key, reason } => write!(f, "{key}: {reason}"),
            CountingError::MarginalMismatch { detector, correlated, product } => write!(
                f,
                "click tables disagree on detector {detector} marginal: {correlated} vs {product}"
            ),
            CountingError::DoubleEfficiencyApplication => {
                write!(f, "detection efficiency applied twice")
            }
            CountingError::InvalidClickTable { reason } => {
                write!(f, "invalid click table: {reason}")
            }
            CountingError::ClickDenominatorZero => {
                write!(f, "click correlation denominator vanished")
            }
            CountingError::OverlappingWindows => write!(f, "peak windows overlap"),
            CountingError::EmptyNormalization { m } => {
                write!(f, "normalization peak m = {m} holds zero counts")
            }
            CountingError::EmptyZeroDelayPeak => write!(f, "zero-delay peak holds zero counts"),
            CountingError::ZeroBackground => write!(f, "background counts must be positive"),
            CountingError::UnsortedStream => write!(f, "time-tag stream is not strictly sorted"),
        }
    }
}

impl core::error::Error for CountingError {}
