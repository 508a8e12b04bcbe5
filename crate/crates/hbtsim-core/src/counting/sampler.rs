use alloc::vec::Vec;

use super::click::ClickTable;
use super::config::ExperimentConfig;
use super::rng::{standard_normal, stream_rng, unit_f64, unit_open_f64};
use super::CountingError;
use crate::math;

/// Pulses per deterministic sampling block. Each block draws from its own
/// ChaCha8 stream keyed by (seed, block index), so blocks may be evaluated
/// in any order — or in parallel — without changing the merged output.
const BLOCK_PULSES: u64 = 1 << 22;

/// Stream ids reserved for the dark-count processes. Pulse blocks use
/// 1..=n_blocks, so the top of the id space stays collision-free.
const DARK_STREAM_1: u64 = u64::MAX - 1;
const DARK_STREAM_2: u64 = u64::MAX;

/// Detection events of both detectors, strictly sorted in integer
/// picoseconds within [0, integration time].
#[derive(Clone, Debug, PartialEq)]
pub struct TimeTagStream {
    pub detector_1: Vec<i64>,
    pub detector_2: Vec<i64>,
    pub integration_time_ps: u64,
    /// Events discarded because another event of the same detector already
    /// occupied the same picosecond (threshold detectors cannot double
    /// fire), plus any removed by a configured dead time.
    pub dropped_events: u64,
}

impl TimeTagStream {
    pub fn is_strictly_sorted(&self) -> bool {
        strictly_sorted(&self.detector_1) && strictly_sorted(&self.detector_2)
    }

    pub fn event_count(&self) -> usize {
        self.detector_1.len() + self.detector_2.len()
    }
}

fn strictly_sorted(v: &[i64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

/// Per-pulse outcome probabilities of the α-mixture. Mixing the correlated
/// and product tables per pulse with probability α is equivalent to
/// sampling the premixed four-outcome table: the marginals are untouched
/// and the coincidence becomes α·p₁₂ + (1−α)·p₁·p₂, so the zero-delay
/// correlation excess scales linearly in α.
struct MixedOutcomes {
    p_both: f64,
    p_only_1: f64,
    p_only_2: f64,
    p_any: f64,
}

fn mix_tables(
    correlated: &ClickTable,
    product: &ClickTable,
    alpha: f64,
) -> Result<MixedOutcomes, CountingError> {
    if math::fabs(correlated.p_click_1 - product.p_click_1) > 1e-12 {
        return Err(CountingError::MarginalMismatch {
            detector: 1,
            correlated: correlated.p_click_1,
            product: product.p_click_1,
        });
    }
    if math::fabs(correlated.p_click_2 - product.p_click_2) > 1e-12 {
        return Err(CountingError::MarginalMismatch {
            detector: 2,
            correlated: correlated.p_click_2,
            product: product.p_click_2,
        });
    }
    let p_both = alpha * correlated.p_coincidence + (1.0 - alpha) * product.p_coincidence;
    let p_only_1 = (correlated.p_click_1 - p_both).max(0.0);
    let p_only_2 = (correlated.p_click_2 - p_both).max(0.0);
    Ok(MixedOutcomes { p_both, p_only_1, p_only_2, p_any: p_both + p_only_1 + p_only_2 })
}

/// Simulate one acquisition: per-pulse clicks from the α-mixture of the two
/// tables, Gaussian-jittered timestamps, independent dark-count processes,
/// and per-detector merge into strictly sorted streams. Deterministic for a
/// fixed config; block-local substreams keep the result independent of
/// evaluation order.
pub fn sample_pulse_train(
    config: &ExperimentConfig,
    correlated: &ClickTable,
    product: &ClickTable,
) -> Result<TimeTagStream, CountingError> {
    config.validate()?;
    let mixed = mix_tables(correlated, product, config.alpha)?;

    let pulses = config.pulse_count();
    let sigma = config.jitter_sigma_ps();
    let expected =
        (pulses as f64 * (mixed.p_both + mixed.p_only_1).min(1.0)).min(1.0e8) as usize + 16;
    let mut clicks_1: Vec<i64> = Vec::with_capacity(expected);
    let mut clicks_2: Vec<i64> = Vec::with_capacity(expected);

    if mixed.p_any > 0.0 {
        let ln_none = if mixed.p_any >= 1.0 { f64::NEG_INFINITY } else { math::ln(1.0 - mixed.p_any) };
        let n_blocks = pulses.div_ceil(BLOCK_PULSES);
        for block in 0..n_blocks {
            let start = block * BLOCK_PULSES;
            let end = (start + BLOCK_PULSES).min(pulses);
            let mut rng = stream_rng(config.seed, 1 + block);
            let mut k = start;
            loop {
                // Geometric skip over no-click pulses.
                let gap = if ln_none == f64::NEG_INFINITY {
                    0
                } else {
                    let u = unit_open_f64(&mut rng);
                    let g = math::ln(u) / ln_none;
                    if g >= (end - k) as f64 {
                        break;
                    }
                    g as u64
                };
                k += gap;
                if k >= end {
                    break;
                }
                let v = unit_f64(&mut rng) * mixed.p_any;
                let (click_1, click_2) = if v < mixed.p_both {
                    (true, true)
                } else if v < mixed.p_both + mixed.p_only_1 {
                    (true, false)
                } else {
                    (false, true)
                };
                let base = config.pulse_time_ps(k);
                if click_1 {
                    clicks_1.push(jittered(base, sigma, &mut rng));
                }
                if click_2 {
                    clicks_2.push(jittered(base, sigma, &mut rng));
                }
                k += 1;
                if k >= end {
                    break;
                }
            }
        }
    }

    let horizon = config.integration_time_ps() as i64;
    let darks_1 = dark_events(config, DARK_STREAM_1, horizon);
    let darks_2 = dark_events(config, DARK_STREAM_2, horizon);

    let mut dropped = 0u64;
    let detector_1 = finalize_detector(clicks_1, darks_1, horizon, config.dead_time_ps, &mut dropped);
    let detector_2 = finalize_detector(clicks_2, darks_2, horizon, config.dead_time_ps, &mut dropped);

    Ok(TimeTagStream {
        detector_1,
        detector_2,
        integration_time_ps: config.integration_time_ps(),
        dropped_events: dropped,
    })
}

fn jittered(base: i64, sigma: f64, rng: &mut rand_chacha::ChaCha8Rng) -> i64 {
    if sigma == 0.0 {
        base
    } else {
        base + math::round(sigma * standard_normal(rng)) as i64
    }
}

/// Homogeneous Poisson process over (0, horizon] via exponential gaps.
fn dark_events(config: &ExperimentConfig, stream: u64, horizon: i64) -> Vec<i64> {
    let mut events = Vec::new();
    if config.dark_rate_hz <= 0.0 {
        return events;
    }
    let mut rng = stream_rng(config.seed, stream);
    let gap_scale_ps = 1.0e12 / config.dark_rate_hz;
    let mut t = 0.0f64;
    loop {
        t += -math::ln(unit_open_f64(&mut rng)) * gap_scale_ps;
        let ts = math::round(t) as i64;
        if ts > horizon {
            return events;
        }
        events.push(ts);
    }
}

/// Merge jittered clicks with dark events, clamp to the acquisition window,
/// enforce strict ordering (same-picosecond collisions collapse into one
/// event) and apply the optional dead time.
fn finalize_detector(
    mut clicks: Vec<i64>,
    darks: Vec<i64>,
    horizon: i64,
    dead_time_ps: u64,
    dropped: &mut u64,
) -> Vec<i64> {
    // Jitter may reorder neighbors only across many σ; sort to be exact.
    if !strictly_sorted(&clicks) {
        clicks.sort_unstable();
    }
    let mut merged = Vec::with_capacity(clicks.len() + darks.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < clicks.len() || j < darks.len() {
        let next = match (clicks.get(i), darks.get(j)) {
            (Some(&c), Some(&d)) if c <= d => {
                i += 1;
                c
            }
            (Some(_), Some(&d)) => {
                j += 1;
                d
            }
            (Some(&c), None) => {
                i += 1;
                c
            }
            (None, Some(&d)) => {
                j += 1;
                d
            }
            (None, None) => unreachable!(),
        };
        if next < 0 || next > horizon {
            *dropped += 1;
            continue;
        }
        if let Some(&last) = merged.last() {
            if next == last || (dead_time_ps > 0 && next - last < dead_time_ps as i64) {
                *dropped += 1;
                continue;
            }
        }
        merged.push(next);
    }
    merged
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{build_histogram, accumulate_peaks, estimate_g};

    fn table(p1: f64, p2: f64, p12: f64) -> ClickTable {
        ClickTable::new(p1, p2, p12).unwrap()
    }

    fn fast_config(alpha: f64, pulses: u64) -> ExperimentConfig {
        ExperimentConfig {
            integration_time_s: (pulses + 1) as f64 * 12.2e-9,
            dark_rate_hz: 0.0,
            jitter_fwhm_ps: 0.0,
            alpha,
            seed: 7,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn fully_correlated_coincidence_rate_matches_table() {
        let corr = table(0.01, 0.01, 0.01);
        let prod = corr.product_of_marginals();
        let cfg = fast_config(1.0, 4_000_000);
        let stream = sample_pulse_train(&cfg, &corr, &prod).unwrap();
        let hist = build_histogram(&stream, &cfg).unwrap();
        let peaks = accumulate_peaks(&hist, &cfg).unwrap();
        let n = cfg.pulse_count() as f64;
        let expect = n * 0.01;
        let sigma = math::sqrt(n * 0.01 * 0.99);
        let c0 = peaks.count_for(0).unwrap() as f64;
        assert!(
            math::fabs(c0 - expect) <= 3.0 * sigma,
            "C0 = {c0}, expected {expect} ± {sigma}"
        );
    }

    #[test]
    fn uncorrelated_sampling_is_flat_in_m() {
        let corr = table(0.02, 0.02, 0.02); // correlated table...
        let prod = corr.product_of_marginals();
        let cfg = fast_config(0.0, 4_000_000); // ...never used at α = 0
        let stream = sample_pulse_train(&cfg, &corr, &prod).unwrap();
        let hist = build_histogram(&stream, &cfg).unwrap();
        let peaks = accumulate_peaks(&hist, &cfg).unwrap();
        let est = estimate_g(&peaks).unwrap();
        assert!(
            math::fabs(est.zero_delay.g_value - 1.0) <= 3.0 * est.zero_delay.sigma,
            "g0 = {} ± {}",
            est.zero_delay.g_value,
            est.zero_delay.sigma
        );
    }

    #[test]
    fn dark_counts_alone_follow_poisson_rate() {
        let corr = table(0.0, 0.0, 0.0);
        let prod = corr.product_of_marginals();
        let cfg = ExperimentConfig {
            integration_time_s: 1.0,
            dark_rate_hz: 100.0,
            alpha: 0.3,
            seed: 11,
            ..ExperimentConfig::default()
        };
        let stream = sample_pulse_train(&cfg, &corr, &prod).unwrap();
        // 100 expected events per detector, ±3·sqrt(100).
        for counts in [stream.detector_1.len(), stream.detector_2.len()] {
            assert!((70..=130).contains(&counts), "dark count {counts}");
        }
        assert!(stream.is_strictly_sorted());
    }

    #[test]
    fn identical_seeds_reproduce_bit_identical_streams() {
        let corr = table(0.015, 0.012, 0.005);
        let prod = corr.product_of_marginals();
        let cfg = ExperimentConfig {
            integration_time_s: 0.002,
            alpha: 0.45,
            seed: 99,
            ..ExperimentConfig::default()
        };
        let a = sample_pulse_train(&cfg, &corr, &prod).unwrap();
        let b = sample_pulse_train(&cfg, &corr, &prod).unwrap();
        assert_eq!(a, b);
        let c = sample_pulse_train(
            &ExperimentConfig { seed: 100, ..cfg },
            &corr,
            &prod,
        )
        .unwrap();
        assert_ne!(a.detector_1, c.detector_1);
    }

    #[test]
    fn marginal_mismatch_is_rejected() {
        let corr = table(0.02, 0.02, 0.01);
        let prod = table(0.02, 0.019, 0.00038);
        let cfg = fast_config(0.5, 1000);
        assert!(matches!(
            sample_pulse_train(&cfg, &corr, &prod),
            Err(CountingError::MarginalMismatch { detector: 2, .. })
        ));
    }

    #[test]
    fn jitterless_clicks_sit_on_the_pulse_grid() {
        let corr = table(0.05, 0.05, 0.02);
        let prod = corr.product_of_marginals();
        let cfg = fast_config(1.0, 20_000);
        let stream = sample_pulse_train(&cfg, &corr, &prod).unwrap();
        assert!(!stream.detector_1.is_empty());
        for &t in stream.detector_1.iter().chain(stream.detector_2.iter()) {
            let offset = (t as u64) % cfg.pulse_period_ps;
            assert_eq!(offset, cfg.pulse_period_ps / 2);
        }
    }

    #[test]
    fn dead_time_suppresses_close_pairs() {
        let corr = table(0.9, 0.0, 0.0);
        let prod = corr.product_of_marginals();
        let cfg = ExperimentConfig {
            dead_time_ps: 40_000, // swallows ~3 pulse periods
            ..fast_config(1.0, 50_000)
        };
        let stream = sample_pulse_train(&cfg, &corr, &prod).unwrap();
        assert!(stream.dropped_events > 0);
        for w in stream.detector_1.windows(2) {
            assert!(w[1] - w[0] >= 40_000);
        }
    }
}
