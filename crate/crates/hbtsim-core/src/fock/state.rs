use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::FockError;
use crate::math;

/// Default tolerated probability mass lost to truncation.
pub const DEFAULT_TRUNCATION_BUDGET: f64 = 1e-8;
/// Hard cap on any per-mode cutoff; construction fails explicitly beyond it.
pub const MAX_CUTOFF: usize = 40;
/// Memory guard on the amplitude tensor (entries, 16 bytes each).
const MAX_TENSOR_ENTRIES: usize = 1 << 26;

/// A pure state on a truncated multimode Fock basis.
///
/// `cutoffs[m]` is the inclusive maximum photon number of mode `m`; the
/// amplitude tensor is dense and row-major with mode 0 slowest. Truncation
/// is never silent: probability mass dropped at preparation or by
/// [`FockState::truncate_mode`] accumulates in [`FockState::deficit`], and
/// [`FockState::boundary_mass`] reports how much of the current state sits
/// on a cutoff boundary (the signature of an under-sized basis, since the
/// truncated evolution itself is exactly unitary).
#[derive(Clone, Debug)]
pub struct FockState {
    cutoffs: Vec<usize>,
    amps: Vec<Complex64>,
    deficit: f64,
    budget: f64,
}

impl FockState {
    /// Vacuum over the given per-mode cutoffs.
    pub fn vacuum(cutoffs: &[usize], budget: f64) -> Result<Self, FockError> {
        let size = checked_size(cutoffs)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); size];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(FockState { cutoffs: cutoffs.to_vec(), amps, deficit: 0.0, budget })
    }

    /// Uniform-cutoff vacuum convenience constructor.
    pub fn vacuum_uniform(mode_count: usize, cutoff: usize, budget: f64) -> Result<Self, FockError> {
        Self::vacuum(&vec![cutoff; mode_count], budget)
    }

    /// Product of coherent states, one amplitude per mode. The Poisson tail
    /// cut off by each mode's bound is charged to the deficit.
    pub fn product_coherent(
        amplitudes: &[Complex64],
        cutoffs: &[usize],
        budget: f64,
    ) -> Result<Self, FockError> {
        if amplitudes.len() != cutoffs.len() {
            return Err(FockError::DimensionMismatch);
        }
        let size = checked_size(cutoffs)?;
        let mut per_mode: Vec<Vec<Complex64>> = Vec::with_capacity(cutoffs.len());
        for (beta, &cut) in amplitudes.iter().zip(cutoffs.iter()) {
            let dim = cut + 1;
            let mut coeffs = Vec::with_capacity(dim);
            // c_k = e^{-|β|²/2} β^k / √(k!), built iteratively for stability.
            let mut c = Complex64::new(math::exp(-0.5 * beta.norm_sqr()), 0.0);
            for k in 0..dim {
                coeffs.push(c);
                c = c * beta / math::sqrt((k + 1) as f64);
            }
            per_mode.push(coeffs);
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); size];
        let dims: Vec<usize> = cutoffs.iter().map(|c| c + 1).collect();
        for (idx, amp) in amps.iter_mut().enumerate() {
            let mut rem = idx;
            let mut value = Complex64::new(1.0, 0.0);
            for m in (0..dims.len()).rev() {
                let n = rem % dims[m];
                rem /= dims[m];
                value *= per_mode[m][n];
            }
            *amp = value;
        }
        let mut state = FockState { cutoffs: cutoffs.to_vec(), amps, deficit: 0.0, budget };
        state.deficit = (1.0 - state.norm_sqr()).max(0.0);
        state.check_budget()?;
        Ok(state)
    }

    /// Build from explicit amplitudes; norm must already lie within the
    /// budget of unity and every amplitude must be finite.
    pub fn from_amplitudes(
        cutoffs: &[usize],
        amps: Vec<Complex64>,
        budget: f64,
    ) -> Result<Self, FockError> {
        let size = checked_size(cutoffs)?;
        if amps.len() != size {
            return Err(FockError::DimensionMismatch);
        }
        let state = FockState { cutoffs: cutoffs.to_vec(), amps, deficit: 0.0, budget };
        let norm = state.norm_sqr_checked()?;
        if norm > 1.0 + 1e-12 || norm < 1.0 - budget {
            return Err(FockError::BadNorm { norm_sqr: norm });
        }
        let mut state = state;
        state.deficit = (1.0 - norm).max(0.0);
        Ok(state)
    }

    pub fn mode_count(&self) -> usize {
        self.cutoffs.len()
    }

    pub fn cutoff(&self, mode: usize) -> usize {
        self.cutoffs[mode]
    }

    pub fn cutoffs(&self) -> &[usize] {
        &self.cutoffs
    }

    pub fn dim(&self, mode: usize) -> usize {
        self.cutoffs[mode] + 1
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    /// Probability mass lost so far (preparation tails plus explicit
    /// truncations); equals 1 − ‖ψ‖² up to rounding.
    pub fn deficit(&self) -> f64 {
        self.deficit
    }

    pub(crate) fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn with_amps(&self, amps: Vec<Complex64>) -> Self {
        FockState {
            cutoffs: self.cutoffs.clone(),
            amps,
            deficit: self.deficit,
            budget: self.budget,
        }
    }

    pub fn amplitude(&self, occupation: &[usize]) -> Complex64 {
        self.amps[self.linear_index(occupation)]
    }

    pub fn strides(&self) -> Vec<usize> {
        let m = self.cutoffs.len();
        let mut strides = vec![1usize; m];
        for i in (0..m.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.dim(i + 1);
        }
        strides
    }

    fn linear_index(&self, occupation: &[usize]) -> usize {
        debug_assert_eq!(occupation.len(), self.cutoffs.len());
        let strides = self.strides();
        occupation.iter().zip(strides.iter()).map(|(&n, &s)| n * s).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn norm_sqr_checked(&self) -> Result<f64, FockError> {
        let mut acc = 0.0;
        for a in &self.amps {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(FockError::NonFiniteAmplitude);
            }
            acc += a.norm_sqr();
        }
        Ok(acc)
    }

    /// Probability that at least one mode sits exactly at its cutoff.
    pub fn boundary_mass(&self) -> f64 {
        let dims: Vec<usize> = self.cutoffs.iter().map(|c| c + 1).collect();
        let mut mass = 0.0;
        for (idx, amp) in self.amps.iter().enumerate() {
            if amp.re == 0.0 && amp.im == 0.0 {
                continue;
            }
            let mut rem = idx;
            let mut on_boundary = false;
            for m in (0..dims.len()).rev() {
                let n = rem % dims[m];
                rem /= dims[m];
                if n == self.cutoffs[m] {
                    on_boundary = true;
                    break;
                }
            }
            if on_boundary {
                mass += amp.norm_sqr();
            }
        }
        mass
    }

    /// Known losses plus boundary mass: the effective truncation error
    /// estimate used by tolerance checks.
    pub fn total_deficit(&self) -> f64 {
        self.deficit + self.boundary_mass()
    }

    /// Fail if the truncation error estimate exceeds the budget.
    pub fn check_budget(&self) -> Result<(), FockError> {
        self.norm_sqr_checked()?;
        let total = self.total_deficit();
        if total > self.budget {
            return Err(FockError::TruncationBudgetExceeded {
                deficit: total,
                budget: self.budget,
            });
        }
        Ok(())
    }

    pub fn check_mode(&self, mode: usize) -> Result<(), FockError> {
        if mode < self.cutoffs.len() {
            Ok(())
        } else {
            Err(FockError::InvalidMode { mode, mode_count: self.cutoffs.len() })
        }
    }

    /// Photon-number marginal of one mode (sums to ‖ψ‖²).
    pub fn marginal(&self, mode: usize) -> Vec<f64> {
        let dims: Vec<usize> = self.cutoffs.iter().map(|c| c + 1).collect();
        let strides = self.strides();
        let mut out = vec![0.0; dims[mode]];
        for (idx, amp) in self.amps.iter().enumerate() {
            let n = (idx / strides[mode]) % dims[mode];
            out[n] += amp.norm_sqr();
        }
        out
    }

    /// Mean photon number of one mode from its marginal.
    pub fn marginal_mean(&self, mode: usize) -> f64 {
        self.marginal(mode)
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    /// Joint photon-number distribution of a mode pair, row-major in the
    /// first mode.
    pub fn joint_marginal(&self, mode_1: usize, mode_2: usize) -> Vec<f64> {
        let dims: Vec<usize> = self.cutoffs.iter().map(|c| c + 1).collect();
        let strides = self.strides();
        let (d1, d2) = (dims[mode_1], dims[mode_2]);
        let mut out = vec![0.0; d1 * d2];
        for (idx, amp) in self.amps.iter().enumerate() {
            if amp.re == 0.0 && amp.im == 0.0 {
                continue;
            }
            let n1 = (idx / strides[mode_1]) % d1;
            let n2 = (idx / strides[mode_2]) % d2;
            out[n1 * d2 + n2] += amp.norm_sqr();
        }
        out
    }

    /// Reduce one mode's cutoff, charging the dropped mass to the deficit.
    pub fn truncate_mode(&self, mode: usize, new_cutoff: usize) -> Result<Self, FockError> {
        self.check_mode(mode)?;
        if new_cutoff >= self.cutoffs[mode] {
            return Ok(self.clone());
        }
        let mut new_cutoffs = self.cutoffs.clone();
        new_cutoffs[mode] = new_cutoff;
        let size = checked_size(&new_cutoffs)?;
        let old_dims: Vec<usize> = self.cutoffs.iter().map(|c| c + 1).collect();
        let mut amps = vec![Complex64::new(0.0, 0.0); size];
        let mut kept = FockState {
            cutoffs: new_cutoffs,
            amps: Vec::new(),
            deficit: self.deficit,
            budget: self.budget,
        };
        let new_strides = kept.strides();
        let mut dropped = 0.0;
        for (idx, amp) in self.amps.iter().enumerate() {
            if amp.re == 0.0 && amp.im == 0.0 {
                continue;
            }
            let mut rem = idx;
            let mut new_idx = 0usize;
            let mut inside = true;
            for m in (0..old_dims.len()).rev() {
                let n = rem % old_dims[m];
                rem /= old_dims[m];
                if m == mode && n > new_cutoff {
                    inside = false;
                    break;
                }
                new_idx += n * new_strides[m];
            }
            if inside {
                amps[new_idx] = *amp;
            } else {
                dropped += amp.norm_sqr();
            }
        }
        kept.amps = amps;
        kept.deficit += dropped;
        Ok(kept)
    }

    /// Append a fresh vacuum mode (used to dilate losses).
    pub fn append_vacuum_mode(&self, cutoff: usize) -> Result<Self, FockError> {
        let mut cutoffs = self.cutoffs.clone();
        cutoffs.push(cutoff);
        let size = checked_size(&cutoffs)?;
        let dim = cutoff + 1;
        let mut amps = vec![Complex64::new(0.0, 0.0); size];
        for (idx, amp) in self.amps.iter().enumerate() {
            amps[idx * dim] = *amp;
        }
        Ok(FockState { cutoffs, amps, deficit: self.deficit, budget: self.budget })
    }
}

fn checked_size(cutoffs: &[usize]) -> Result<usize, FockError> {
    if cutoffs.is_empty() {
        return Err(FockError::DimensionMismatch);
    }
    let mut size: usize = 1;
    for &c in cutoffs {
        if c > MAX_CUTOFF {
            return Err(FockError::CutoffCapExceeded { required: c });
        }
        size = size
            .checked_mul(c + 1)
            .ok_or(FockError::TensorTooLarge { entries: usize::MAX })?;
        if size > MAX_TENSOR_ENTRIES {
            return Err(FockError::TensorTooLarge { entries: size });
        }
    }
    Ok(size)
}

/// Smallest cutoff whose Poisson tail beyond it stays under `tail`.
pub fn suggest_cutoff_poissonian(mean: f64, tail: f64) -> Result<usize, FockError> {
    if mean <= 0.0 {
        return Ok(0);
    }
    let mut pmf = math::exp(-mean);
    let mut cdf = pmf;
    for k in 0..4 * MAX_CUTOFF {
        if 1.0 - cdf <= tail {
            return Ok(k);
        }
        pmf *= mean / (k + 1) as f64;
        cdf += pmf;
    }
    Err(FockError::CutoffCapExceeded { required: 4 * MAX_CUTOFF })
}

/// Smallest cutoff whose geometric (thermal) tail stays under `tail`:
/// P(X > N) = (μ/(1+μ))^{N+1}.
pub fn suggest_cutoff_thermal(mean: f64, tail: f64) -> Result<usize, FockError> {
    if mean <= 0.0 {
        return Ok(0);
    }
    let ratio = mean / (1.0 + mean);
    let mut tail_mass = ratio;
    for n in 0..4 * MAX_CUTOFF {
        if tail_mass <= tail {
            return Ok(n);
        }
        tail_mass *= ratio;
    }
    Err(FockError::CutoffCapExceeded { required: 4 * MAX_CUTOFF })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        math::fabs(a - b) <= tol
    }

    #[test]
    fn coherent_marginal_is_poissonian() {
        let n = 1.09;
        let beta = Complex64::new(math::sqrt(n), 0.0);
        let s = FockState::product_coherent(&[beta], &[25], 1e-8).unwrap();
        let marg = s.marginal(0);
        let mut pmf = math::exp(-n);
        for (k, p) in marg.iter().enumerate() {
            assert!(close(*p, pmf, 1e-12), "P({k})");
            pmf *= n / (k + 1) as f64;
        }
        assert!(close(s.marginal_mean(0), n, 1e-9));
        s.check_budget().unwrap();
    }

    #[test]
    fn preparation_deficit_is_reported_not_hidden() {
        // A deliberately undersized basis must carry the missing tail as
        // deficit, and the budget check must reject it.
        let beta = Complex64::new(2.0, 0.0); // mean 4
        let s = FockState::product_coherent(&[beta], &[6], 1.0).unwrap();
        assert!(s.deficit() > 1e-3);
        assert!(close(s.norm_sqr(), 1.0 - s.deficit(), 1e-12));
        let strict = FockState::product_coherent(&[beta], &[6], 1e-8);
        assert!(matches!(strict, Err(FockError::TruncationBudgetExceeded { .. })));
    }

    #[test]
    fn truncate_mode_accounts_dropped_mass() {
        let beta = Complex64::new(1.0, 0.5);
        let s = FockState::product_coherent(&[beta, beta], &[12, 12], 1e-6).unwrap();
        let cut = s.truncate_mode(1, 4).unwrap();
        assert_eq!(cut.cutoff(1), 4);
        assert!(close(cut.norm_sqr() + cut.deficit(), 1.0, 1e-12));
        assert!(cut.deficit() > s.deficit());
        // Remaining amplitudes are untouched.
        assert!(close(
            (cut.amplitude(&[2, 3]) - s.amplitude(&[2, 3])).norm_sqr(),
            0.0,
            1e-28
        ));
    }

    #[test]
    fn append_vacuum_mode_keeps_physics() {
        let beta = Complex64::new(0.8, 0.0);
        let s = FockState::product_coherent(&[beta], &[10], 1e-8).unwrap();
        let ext = s.append_vacuum_mode(5).unwrap();
        assert_eq!(ext.mode_count(), 2);
        assert!(close(ext.norm_sqr(), s.norm_sqr(), 1e-14));
        assert!(close(ext.marginal(1)[0], s.norm_sqr(), 1e-14));
        assert!(close(ext.marginal_mean(0), s.marginal_mean(0), 1e-14));
    }

    #[test]
    fn from_amplitudes_validates() {
        let bad = FockState::from_amplitudes(
            &[1],
            vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0)],
            1e-8,
        );
        assert!(matches!(bad, Err(FockError::BadNorm { .. })));
        let nan = FockState::from_amplitudes(
            &[1],
            vec![Complex64::new(f64::NAN, 0.0), Complex64::new(0.0, 0.0)],
            1e-8,
        );
        assert!(matches!(nan, Err(FockError::NonFiniteAmplitude)));
        let one = FockState::from_amplitudes(
            &[1],
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            1e-8,
        )
        .unwrap();
        assert!(close(one.marginal_mean(0), 1.0, 1e-15));
    }

    #[test]
    fn cutoff_suggestions_bound_the_tail() {
        let cut = suggest_cutoff_poissonian(4.0, 1e-9).unwrap();
        // Exact Poisson tail beyond the suggestion is within the target.
        let mut pmf = math::exp(-4.0);
        let mut cdf = pmf;
        for k in 1..=cut {
            pmf *= 4.0 / k as f64;
            cdf += pmf;
        }
        assert!(1.0 - cdf <= 1e-9);
        assert!(suggest_cutoff_poissonian(0.0, 1e-12).unwrap() == 0);

        let cut = suggest_cutoff_thermal(1.02, 1e-9).unwrap();
        let ratio: f64 = 1.02 / 2.02;
        assert!(libm::pow(ratio, (cut + 1) as f64) <= 1e-9);
        assert!(libm::pow(ratio, cut as f64) > 1e-9);
    }

    #[test]
    fn cutoff_cap_is_enforced() {
        assert!(matches!(
            FockState::vacuum(&[MAX_CUTOFF + 1], 1e-8),
            Err(FockError::CutoffCapExceeded { .. })
        ));
    }

    #[test]
    fn tensor_memory_guard() {
        let err = FockState::vacuum(&[40, 40, 40, 40, 40], 1e-8);
        assert!(matches!(err, Err(FockError::TensorTooLarge { .. })));
    }
}
