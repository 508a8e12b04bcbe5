//! Exact Gaussian-state engine.
//!
//! A state is a quadrature displacement vector plus a symmetric covariance
//! matrix in interleaved (x₁,p₁,x₂,p₂,…) ordering with ħ = 1 symmetric
//! ordering, so the vacuum covariance is I/2 and a coherent state β has
//! displacement (√2·Re β, √2·Im β). Circuit elements act as symplectic maps
//! (plus the Gaussian loss channel), and photon-number moments up to fourth
//! order come from Wick's theorem over the complex mode-operator blocks, so
//! every number reported here is exact for Gaussian inputs.

mod circuit;
mod moments;
mod state;

pub use circuit::{
    apply_circuit, apply_element, build_hbt_circuit, Circuit, CircuitElement, HbtParams, D1_MODE,
    D2_MODE,
};
pub use moments::{hbt_correlator, mean_photon, photon_number_product};
pub use state::{prepare_coherent, GaussianState};

use core::fmt;

/// Errors from Gaussian-state construction and circuit application.
#[derive(Clone, Debug, PartialEq)]
pub enum GaussianError {
    /// A mode index is out of range for the state or circuit.
    InvalidMode { mode: usize, mode_count: usize },
    /// A circuit element references the same mode twice.
    DuplicateMode { mode: usize },
    /// A parameter lies outside its admissible range.
    ParameterOutOfRange { name: &'static str, value: f64 },
    /// A mode label was registered twice or mapped to an occupied index.
    LabelNotInjective,
    /// Covariance asymmetry or symplectic spectrum violates physicality.
    Unphysical { detail: &'static str },
    /// A denominator mean photon number underflowed (below 1e-15).
    ZeroIntensity { mode: usize },
    /// Displacement/covariance dimensions do not match the mode count.
    DimensionMismatch,
}

impl fmt::Display for GaussianError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaussianError::InvalidMode { mode, mode_count } => {
                write!(f, "mode index {mode} out of range for {mode_count} modes")
            }
            GaussianError::DuplicateMode { mode } => {
                write!(f, "circuit element references mode {mode} twice")
            }
            GaussianError::ParameterOutOfRange { name, value } => {
                write!(f, "parameter {name} = {value} out of range")
            }
            GaussianError::LabelNotInjective => write!(f, "mode label map is not injective"),
            GaussianError::Unphysical { detail } => write!(f, "unphysical state: {detail}"),
            GaussianError::ZeroIntensity { mode } => {
                write!(f, "mean photon number of mode {mode} underflowed")
            }
            GaussianError::DimensionMismatch => write!(f, "dimension mismatch"),
        }
    }
}

impl core::error::Error for GaussianError {}
