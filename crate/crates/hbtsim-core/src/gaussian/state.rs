use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::GaussianError;
use crate::mat::{symplectic_eigenvalues, Mat};
use crate::math;

/// Tolerated covariance asymmetry.
const SYMMETRY_TOL: f64 = 1e-12;
/// Symplectic eigenvalues may undershoot the vacuum floor 1/2 by this much.
const PHYSICALITY_TOL: f64 = 1e-9;

/// A Gaussian state over M modes: quadrature means and symmetric covariance
/// in interleaved (x₁,p₁,…) ordering, vacuum covariance = I/2.
#[derive(Clone, Debug)]
pub struct GaussianState {
    modes: usize,
    disp: Vec<f64>,
    cov: Mat,
}

impl GaussianState {
    /// Vacuum on `modes` modes: zero displacement, covariance I/2.
    pub fn vacuum(modes: usize) -> Self {
        GaussianState {
            modes,
            disp: vec![0.0; 2 * modes],
            cov: Mat::scaled_identity(2 * modes, 0.5),
        }
    }

    /// Build from raw parts, checking dimensions and physicality.
    pub fn from_parts(modes: usize, disp: Vec<f64>, cov_rows: &[f64]) -> Result<Self, GaussianError> {
        let n = 2 * modes;
        if disp.len() != n || cov_rows.len() != n * n {
            return Err(GaussianError::DimensionMismatch);
        }
        let mut cov = Mat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                cov.set(i, j, cov_rows[i * n + j]);
            }
        }
        let state = GaussianState { modes, disp, cov };
        state.check_physical()?;
        Ok(state)
    }

    pub fn mode_count(&self) -> usize {
        self.modes
    }

    pub fn displacement(&self) -> &[f64] {
        &self.disp
    }

    pub fn covariance(&self, i: usize, j: usize) -> f64 {
        self.cov.get(i, j)
    }

    /// Mean of the annihilation operator of `mode`: (⟨x⟩ + i⟨p⟩)/√2.
    pub fn mode_amplitude(&self, mode: usize) -> Complex64 {
        Complex64::new(self.disp[2 * mode], self.disp[2 * mode + 1]) / math::sqrt(2.0)
    }

    pub fn check_mode(&self, mode: usize) -> Result<(), GaussianError> {
        if mode < self.modes {
            Ok(())
        } else {
            Err(GaussianError::InvalidMode { mode, mode_count: self.modes })
        }
    }

    /// Symplectic eigenvalues of the covariance matrix, ascending.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        symplectic_eigenvalues(&self.cov)
    }

    /// Covariance symmetry and the uncertainty bound (all symplectic
    /// eigenvalues ≥ 1/2 up to tolerance).
    pub fn check_physical(&self) -> Result<(), GaussianError> {
        if self.cov.max_asymmetry() > SYMMETRY_TOL {
            return Err(GaussianError::Unphysical { detail: "covariance not symmetric" });
        }
        let min_nu = self
            .symplectic_eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_nu < 0.5 - PHYSICALITY_TOL {
            return Err(GaussianError::Unphysical {
                detail: "symplectic eigenvalue below vacuum floor",
            });
        }
        Ok(())
    }

    pub(crate) fn disp_mut(&mut self) -> &mut Vec<f64> {
        &mut self.disp
    }

    pub(crate) fn cov_ref(&self) -> &Mat {
        &self.cov
    }

    pub(crate) fn cov_mut(&mut self) -> &mut Mat {
        &mut self.cov
    }

    pub(crate) fn replace_cov(&mut self, cov: Mat) {
        self.cov = cov;
    }
}

/// Product of coherent states with the given complex amplitudes, one per
/// mode (vacuum where the amplitude is zero).
pub fn prepare_coherent(
    mode_count: usize,
    amplitudes: &[Complex64],
) -> Result<GaussianState, GaussianError> {
    if mode_count == 0 || amplitudes.len() != mode_count {
        return Err(GaussianError::DimensionMismatch);
    }
    let mut state = GaussianState::vacuum(mode_count);
    let root2 = math::sqrt(2.0);
    for (m, beta) in amplitudes.iter().enumerate() {
        state.disp[2 * m] = root2 * beta.re;
        state.disp[2 * m + 1] = root2 * beta.im;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::mean_photon;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        math::fabs(a - b) <= tol
    }

    #[test]
    fn vacuum_is_vacuum() {
        let s = prepare_coherent(1, &[Complex64::new(0.0, 0.0)]).unwrap();
        assert_eq!(s.displacement(), &[0.0, 0.0]);
        assert_eq!(s.covariance(0, 0), 0.5);
        assert_eq!(s.covariance(1, 1), 0.5);
        assert_eq!(s.covariance(0, 1), 0.0);
        assert!(close(mean_photon(&s, 0).unwrap(), 0.0, 1e-15));
        s.check_physical().unwrap();
    }

    #[test]
    fn coherent_mean_photon_matches_intensity() {
        // |β|² = 1.09 and 7.72: the calibrated input intensities.
        for n in [1.09_f64, 7.72] {
            let beta = Complex64::new(math::sqrt(n), 0.0);
            let s = prepare_coherent(1, &[beta]).unwrap();
            assert!(close(mean_photon(&s, 0).unwrap(), n, 1e-12));
        }
        // A complex phase must not change the intensity.
        let beta = Complex64::new(0.6, -0.8);
        let s = prepare_coherent(1, &[beta]).unwrap();
        assert!(close(mean_photon(&s, 0).unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn unexcited_mode_stays_dark() {
        let s = prepare_coherent(2, &[Complex64::new(2.0, 1.0), Complex64::new(0.0, 0.0)])
            .unwrap();
        assert!(close(mean_photon(&s, 1).unwrap(), 0.0, 1e-15));
    }

    #[test]
    fn from_parts_rejects_asymmetric_covariance() {
        let mut rows = vec![0.0; 4];
        rows[0] = 0.5;
        rows[3] = 0.5;
        rows[1] = 1e-6; // asymmetric off-diagonal
        let err = GaussianState::from_parts(1, vec![0.0, 0.0], &rows).unwrap_err();
        assert!(matches!(err, GaussianError::Unphysical { .. }));
    }

    #[test]
    fn from_parts_rejects_sub_vacuum_noise() {
        let rows = vec![0.25, 0.0, 0.0, 0.25]; // ν = 1/4 < 1/2
        let err = GaussianState::from_parts(1, vec![0.0, 0.0], &rows).unwrap_err();
        assert!(matches!(err, GaussianError::Unphysical { .. }));
    }

    #[test]
    fn displacement_convention() {
        let beta = Complex64::new(1.5, -0.5);
        let s = prepare_coherent(1, &[beta]).unwrap();
        let r2 = math::sqrt(2.0);
        assert!(close(s.displacement()[0], r2 * 1.5, 1e-15));
        assert!(close(s.displacement()[1], -r2 * 0.5, 1e-15));
        assert!(close((s.mode_amplitude(0) - beta).norm_sqr(), 0.0, 1e-24));
    }
}
