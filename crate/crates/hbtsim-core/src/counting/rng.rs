//! Seeded random primitives for the counting simulation.
//!
//! All randomness flows through ChaCha8 streams derived from one master
//! seed, so every run is reproducible bit-for-bit and independent
//! substreams (pulse blocks, dark-count processes) never overlap.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::math;

/// A ChaCha8 generator on stream `stream` of the master seed.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform f64 in [0, 1) with 53 random bits.
#[inline]
pub(crate) fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform f64 in (0, 1]; safe as a logarithm argument.
#[inline]
pub(crate) fn unit_open_f64(rng: &mut impl RngCore) -> f64 {
    1.0 - unit_f64(rng)
}

/// Standard normal deviate by the Box-Muller transform.
#[inline]
pub(crate) fn standard_normal(rng: &mut impl RngCore) -> f64 {
    let u1 = unit_open_f64(rng);
    let u2 = unit_f64(rng);
    math::sqrt(-2.0 * math::ln(u1)) * math::cos(2.0 * core::f64::consts::PI * u2)
}
