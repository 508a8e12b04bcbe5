//! Photon-number moments of Gaussian states via Wick's theorem.
//!
//! The covariance matrix is reduced to complex mode-operator blocks
//!
//! * N_ij = ⟨δa_i† δa_j⟩ (normal block, Hermitian)
//! * M_ij = ⟨δa_i δa_j⟩ (anomalous block, symmetric)
//!
//! and fourth-order moments follow from the three Wick pairings of the
//! fluctuation operators plus displacement cross terms. Working in mode
//! operators instead of raw quadratures keeps ⟨n_i n_j⟩ to three pairings.

use num_complex::Complex64;

use super::state::GaussianState;
use super::GaussianError;

/// Means below this threshold count as dark for correlator denominators.
const INTENSITY_FLOOR: f64 = 1e-15;

/// N_ij = ⟨δa_i† δa_j⟩ from the symmetrized covariance; the i = j case
/// subtracts the vacuum half-quantum.
fn normal_block(state: &GaussianState, i: usize, j: usize) -> Complex64 {
    let (xi, pi) = (2 * i, 2 * i + 1);
    let (xj, pj) = (2 * j, 2 * j + 1);
    let re = 0.5 * (state.covariance(xi, xj) + state.covariance(pi, pj));
    let im = 0.5 * (state.covariance(xi, pj) - state.covariance(pi, xj));
    let delta = if i == j { 0.5 } else { 0.0 };
    Complex64::new(re - delta, im)
}

/// M_ij = ⟨δa_i δa_j⟩ from the symmetrized covariance.
fn anomalous_block(state: &GaussianState, i: usize, j: usize) -> Complex64 {
    let (xi, pi) = (2 * i, 2 * i + 1);
    let (xj, pj) = (2 * j, 2 * j + 1);
    let re = 0.5 * (state.covariance(xi, xj) - state.covariance(pi, pj));
    let im = 0.5 * (state.covariance(xi, pj) + state.covariance(pi, xj));
    Complex64::new(re, im)
}

/// Mean photon number ⟨a†a⟩ of one mode.
pub fn mean_photon(state: &GaussianState, mode: usize) -> Result<f64, GaussianError> {
    state.check_mode(mode)?;
    let thermal = normal_block(state, mode, mode).re;
    let value = thermal + state.mode_amplitude(mode).norm_sqr();
    // Exact zero can round to a tiny negative.
    Ok(if value < 0.0 && value > -1e-12 { 0.0 } else { value })
}

/// Second-order photon-number moment ⟨n_i n_j⟩ (the i = j case returns
/// ⟨n²⟩). Exact for Gaussian states via Wick expansion.
pub fn photon_number_product(
    state: &GaussianState,
    mode_i: usize,
    mode_j: usize,
) -> Result<f64, GaussianError> {
    state.check_mode(mode_i)?;
    state.check_mode(mode_j)?;
    if mode_i == mode_j {
        let alpha = state.mode_amplitude(mode_i);
        let n = normal_block(state, mode_i, mode_i).re;
        let m = anomalous_block(state, mode_i, mode_i);
        let a2 = alpha.norm_sqr();
        let value = a2 * a2
            + 4.0 * a2 * n
            + a2
            + 2.0 * (alpha * alpha * m.conj()).re
            + 2.0 * n * n
            + n
            + m.norm_sqr();
        return Ok(value);
    }
    let ai = state.mode_amplitude(mode_i);
    let aj = state.mode_amplitude(mode_j);
    let nii = normal_block(state, mode_i, mode_i).re;
    let njj = normal_block(state, mode_j, mode_j).re;
    let nij = normal_block(state, mode_i, mode_j);
    let mij = anomalous_block(state, mode_i, mode_j);
    let value = ai.norm_sqr() * aj.norm_sqr()
        + aj.norm_sqr() * nii
        + ai.norm_sqr() * njj
        + 2.0 * (ai * aj * mij.conj()).re
        + 2.0 * (ai * aj.conj() * nij).re
        + nii * njj
        + mij.norm_sqr()
        + nij.norm_sqr();
    Ok(value)
}

/// Normalized cross-correlation g⁽²⁾ = ⟨n₁n₂⟩ / (⟨n₁⟩⟨n₂⟩) between two
/// detector modes. On the stimulated-amplifier circuit this equals the
/// antinormally ordered autocorrelation of the signal input, independent of
/// splitting ratio and losses.
pub fn hbt_correlator(
    state: &GaussianState,
    mode_1: usize,
    mode_2: usize,
) -> Result<f64, GaussianError> {
    let m1 = mean_photon(state, mode_1)?;
    let m2 = mean_photon(state, mode_2)?;
    if m1 <= INTENSITY_FLOOR {
        return Err(GaussianError::ZeroIntensity { mode: mode_1 });
    }
    if m2 <= INTENSITY_FLOOR {
        return Err(GaussianError::ZeroIntensity { mode: mode_2 });
    }
    Ok(photon_number_product(state, mode_1, mode_2)? / (m1 * m2))
}
