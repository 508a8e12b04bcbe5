//! Brute-force oracle on a truncated Fock basis.
//!
//! States are dense complex amplitude tensors over per-mode photon-number
//! cutoffs. Circuit elements act through the matrix exponential of their
//! truncated quadratic generators (scaled Taylor with norm control, applied
//! matrix-free to the two-mode sector), losses are dilated onto appended
//! vacuum ancillas, and every truncation is accounted: probability mass lost
//! at preparation or by explicit cutoff reduction accumulates in a deficit,
//! and mass sitting on a cutoff boundary is reported so downstream
//! tolerances can scale with it. Nothing here assumes Gaussianity, which is
//! what makes this module the cross-check for the `gaussian` engine and the
//! source of joint photon-number distributions for click sampling.

mod evolve;
mod pnr;
mod state;

pub use evolve::{
    apply_beam_splitter, apply_element, apply_loss, apply_phase, apply_two_mode_squeezer,
    run_circuit,
};
pub use pnr::{antinormal_fourth_moment, joint_pnr, JointPnrDistribution};
pub use state::{FockState, DEFAULT_TRUNCATION_BUDGET, MAX_CUTOFF};

use core::fmt;

use num_complex::Complex64;

use crate::gaussian::{GaussianError, HbtParams};
use crate::math;

/// Errors from Fock-basis construction and evolution.
#[derive(Clone, Debug, PartialEq)]
pub enum FockError {
    /// Accumulated truncation deficit exceeded the declared budget.
    TruncationBudgetExceeded { deficit: f64, budget: f64 },
    /// The tail bound demands a cutoff beyond the hard cap.
    CutoffCapExceeded { required: usize },
    /// A mode index is out of range.
    InvalidMode { mode: usize, mode_count: usize },
    /// A two-mode element references the same mode twice.
    DuplicateMode { mode: usize },
    /// The amplitude tensor would not fit in the memory guard.
    TensorTooLarge { entries: usize },
    /// An amplitude is NaN or infinite.
    NonFiniteAmplitude,
    /// Norm outside [1 − budget, 1 + ε] on construction.
    BadNorm { norm_sqr: f64 },
    /// Dimensions of amplitudes / cutoffs disagree.
    DimensionMismatch,
    /// The Taylor expansion failed to converge (bounded iterations).
    NoConvergence,
    /// An embedded circuit element failed validation.
    Element(GaussianError),
}

impl fmt::Display for FockError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FockError::TruncationBudgetExceeded { deficit, budget } => {
                write!(f, "truncation deficit {deficit:.3e} exceeds budget {budget:.3e}")
            }
            FockError::CutoffCapExceeded { required } => {
                write!(f, "required cutoff {required} exceeds the cap of {MAX_CUTOFF}")
            }
            FockError::InvalidMode { mode, mode_count } => {
                write!(f, "mode index {mode} out of range for {mode_count} modes")
            }
            FockError::DuplicateMode { mode } => {
                write!(f, "element references mode {mode} twice")
            }
            FockError::TensorTooLarge { entries } => {
                write!(f, "amplitude tensor of {entries} entries exceeds the memory guard")
            }
            FockError::NonFiniteAmplitude => write!(f, "non-finite amplitude encountered"),
            FockError::BadNorm { norm_sqr } => {
                write!(f, "state norm² = {norm_sqr} outside the truncation budget")
            }
            FockError::DimensionMismatch => write!(f, "dimension mismatch"),
            FockError::NoConvergence => write!(f, "series expansion failed to converge"),
            FockError::Element(e) => write!(f, "invalid circuit element: {e}"),
        }
    }
}

impl core::error::Error for FockError {}

impl From<GaussianError> for FockError {
    fn from(e: GaussianError) -> Self {
        FockError::Element(e)
    }
}

/// How detection losses enter a joint photon-number distribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LossHandling {
    /// Dilate η₁/η₂ as ancilla beam splitters inside the Fock evolution.
    Dilated,
    /// Leave the joint lossless; efficiencies are folded into the click
    /// probabilities downstream instead.
    Excluded,
}

/// Joint photon-number distribution of the two detector modes of the
/// correlator circuit, with cutoffs sized from tail bounds and verified
/// post hoc through the boundary-mass check.
pub fn hbt_joint(
    params: &HbtParams,
    budget: f64,
    loss: LossHandling,
) -> Result<JointPnrDistribution, FockError> {
    params.validate()?;
    let n = params.input_mean_photon();
    let c = math::cosh(params.r);
    let s = math::sinh(params.r);
    let mean_a = c * c * n + s * s;
    let mean_b = s * s * (n + 1.0);
    // Budget split across preparation, two truncations and two dilations.
    let stage_tail = budget / 16.0;

    let cutoff_a = state::suggest_cutoff_poissonian(mean_a, stage_tail * 1e-3)? + 3;
    let cutoff_b = (state::suggest_cutoff_thermal(mean_b, stage_tail)? + 2).max(3);
    let cutoff_a = cutoff_a.min(MAX_CUTOFF);
    let cutoff_b = cutoff_b.min(MAX_CUTOFF);

    let zero = Complex64::new(0.0, 0.0);
    let psi = FockState::product_coherent(
        &[params.input_amplitude, zero, zero],
        &[cutoff_a, cutoff_b, cutoff_b],
        budget,
    )?;
    let psi = apply_two_mode_squeezer(&psi, 0, 1, params.r, params.theta)?;
    let psi = apply_beam_splitter(&psi, 1, 2, params.t_sq)?;

    let psi = match loss {
        LossHandling::Excluded => psi,
        LossHandling::Dilated => {
            // Shrink the split arms to their own tail bounds before paying
            // for two more tensor factors.
            let mut psi = psi;
            for mode in [1usize, 2] {
                let mean = psi.marginal_mean(mode);
                let cut = (state::suggest_cutoff_thermal(1.5 * mean + 0.1, stage_tail)? + 2)
                    .max(3)
                    .min(MAX_CUTOFF);
                if cut < psi.cutoff(mode) {
                    psi = psi.truncate_mode(mode, cut)?;
                }
            }
            for (mode, eta) in [(1usize, params.eta1), (2usize, params.eta2)] {
                let mean = psi.marginal_mean(mode);
                let anc = (state::suggest_cutoff_thermal(
                    1.5 * (1.0 - eta) * mean + 0.1,
                    stage_tail,
                )? + 2)
                    .max(3)
                    .min(psi.cutoff(mode));
                psi = apply_loss(&psi, mode, eta, anc)?;
            }
            psi
        }
    };

    let mut joint = joint_pnr(&psi, 1, 2)?;
    joint.loss_applied = matches!(loss, LossHandling::Dilated);
    Ok(joint)
}
