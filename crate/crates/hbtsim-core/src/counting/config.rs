use super::CountingError;
use crate::math;

/// Parameters of one counting run.
///
/// Defaults describe the modeled bench: a 12.2 ns mode-locked pulse train
/// (~82 MHz), avalanche photodiodes with 350 ps response-time jitter and
/// 100 s⁻¹ dark rate, a 25 ps time-interval analyzer, and a 3 ns
/// accumulation window per coincidence peak.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentConfig {
    /// Pulse period τ in integer picoseconds; the authoritative time grid.
    pub pulse_period_ps: u64,
    /// Nominal repetition rate; must match 1/τ within 1%.
    pub repetition_rate_hz: f64,
    /// Acquisition duration in seconds.
    pub integration_time_s: f64,
    /// Detector response jitter, Gaussian FWHM in ps (the quoted 350 ps
    /// figure is read as FWHM).
    pub jitter_fwhm_ps: f64,
    /// Dark-count rate per detector, s⁻¹.
    pub dark_rate_hz: f64,
    /// Histogram bin width in ps.
    pub bin_width_ps: u64,
    /// Full width of the per-peak accumulation window in ps.
    pub peak_window_ps: u64,
    /// Detector dead time in ps; 0 disables it (the default — at the count
    /// rates modeled here it is negligible).
    pub dead_time_ps: u64,
    /// Indistinguishability mixture parameter α ∈ [0, 1].
    pub alpha: f64,
    /// Master seed; every random draw in a run derives from it.
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            pulse_period_ps: 12_200,
            repetition_rate_hz: 82.0e6,
            integration_time_s: 1.0,
            jitter_fwhm_ps: 350.0,
            dark_rate_hz: 100.0,
            bin_width_ps: 25,
            peak_window_ps: 3_000,
            dead_time_ps: 0,
            alpha: 1.0,
            seed: 1,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CountingError> {
        let bad = |key, reason| Err(CountingError::InvalidConfig { key, reason });
        if self.pulse_period_ps == 0 {
            return bad("pulse_period_ps", "must be positive");
        }
        if self.bin_width_ps == 0 {
            return bad("bin_width_ps", "must be positive");
        }
        if !(self.integration_time_s > 0.0) || !self.integration_time_s.is_finite() {
            return bad("integration_time_s", "must be positive and finite");
        }
        if !(self.jitter_fwhm_ps >= 0.0) || !self.jitter_fwhm_ps.is_finite() {
            return bad("jitter_fwhm_ps", "must be non-negative and finite");
        }
        if !(self.dark_rate_hz >= 0.0) || !self.dark_rate_hz.is_finite() {
            return bad("dark_rate_hz", "must be non-negative and finite");
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return bad("alpha", "must lie in [0, 1]");
        }
        if 2 * self.peak_window_ps >= self.pulse_period_ps {
            return bad("peak_window_ps", "must be below half the pulse period");
        }
        if self.window_bins() == 0 {
            return bad("peak_window_ps", "rounds to zero histogram bins");
        }
        if !(self.repetition_rate_hz > 0.0) || !self.repetition_rate_hz.is_finite() {
            return bad("repetition_rate_hz", "must be positive and finite");
        }
        let implied = 1.0e12 / self.pulse_period_ps as f64;
        if math::fabs(self.repetition_rate_hz - implied) > 0.01 * implied {
            return bad("repetition_rate_hz", "inconsistent with pulse_period_ps beyond 1%");
        }
        Ok(())
    }

    pub fn integration_time_ps(&self) -> u64 {
        math::round(self.integration_time_s * 1.0e12) as u64
    }

    /// Pulses fitting the acquisition with half a period of margin on both
    /// ends, so jittered detections stay inside [0, T].
    pub fn pulse_count(&self) -> u64 {
        (self.integration_time_ps() / self.pulse_period_ps).saturating_sub(1)
    }

    /// Emission time of pulse `k`: (k + 1/2)·τ.
    pub fn pulse_time_ps(&self, k: u64) -> i64 {
        (k * self.pulse_period_ps + self.pulse_period_ps / 2) as i64
    }

    pub fn jitter_sigma_ps(&self) -> f64 {
        self.jitter_fwhm_ps / math::FWHM_PER_SIGMA
    }

    /// Accumulation window rounded to a whole number of bins.
    pub fn window_bins(&self) -> u64 {
        (self.peak_window_ps + self.bin_width_ps / 2) / self.bin_width_ps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_derive() {
        let c = ExperimentConfig::default();
        c.validate().unwrap();
        assert_eq!(c.integration_time_ps(), 1_000_000_000_000);
        assert_eq!(c.pulse_count(), 81_967_212);
        assert_eq!(c.window_bins(), 120);
        assert!(math::fabs(c.jitter_sigma_ps() - 148.63) < 0.01);
        assert_eq!(c.pulse_time_ps(0), 6_100);
        assert_eq!(c.pulse_time_ps(1), 18_300);
    }

    #[test]
    fn validation_names_the_offending_key() {
        let mut c = ExperimentConfig { alpha: 1.4, ..ExperimentConfig::default() };
        match c.validate().unwrap_err() {
            CountingError::InvalidConfig { key, .. } => assert_eq!(key, "alpha"),
            other => panic!("unexpected error {other:?}"),
        }
        c.alpha = 0.5;
        c.peak_window_ps = 6_100;
        match c.validate().unwrap_err() {
            CountingError::InvalidConfig { key, .. } => assert_eq!(key, "peak_window_ps"),
            other => panic!("unexpected error {other:?}"),
        }
        c.peak_window_ps = 3_000;
        c.repetition_rate_hz = 70.0e6;
        match c.validate().unwrap_err() {
            CountingError::InvalidConfig { key, .. } => assert_eq!(key, "repetition_rate_hz"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn last_pulse_leaves_jitter_margin() {
        let c = ExperimentConfig {
            integration_time_s: 1.0e-4,
            ..ExperimentConfig::default()
        };
        c.validate().unwrap();
        let last = c.pulse_time_ps(c.pulse_count() - 1);
        assert!(last <= c.integration_time_ps() as i64 - (c.pulse_period_ps / 2) as i64);
    }
}
