//! Simulation and analysis of antinormally ordered Hanbury-Brown–Twiss
//! correlation measurements on stimulated parametric down-conversion.
//!
//! The crate is organized around two independent descriptions of the same
//! optical circuit plus the counting experiment built on top of them:
//!
//! * [`gaussian`] — exact Gaussian-state engine. States are (displacement,
//!   covariance) pairs; circuit elements act symplectically and all
//!   photon-number moments, including the antinormal correlator, come out of
//!   Wick's theorem in closed form.
//! * [`fock`] — brute-force oracle on a truncated Fock basis. Slower and
//!   truncation-limited, but makes no Gaussian assumptions; it cross-checks
//!   `gaussian` and supplies the joint photon-number distributions that feed
//!   the counting simulation.
//! * [`counting`] — Monte Carlo model of the pulsed click-counting
//!   experiment: per-pulse click sampling with an indistinguishability
//!   mixture, detector jitter and dark counts, time-interval histogramming,
//!   peak accumulation and correlation estimation.
//! * [`analysis`] — the bunching model g(n, α), its weighted least-squares
//!   fit, and the χ² goodness-of-fit machinery.
//! * [`verify`] — cross-checks between the two circuit descriptions and
//!   between click-level and photon-number-level correlators.
//!
//! Everything here is `no_std` + `alloc`; all transcendentals go through
//! `libm` so results are reproducible bit-for-bit across platforms. File
//! formats, configuration and the command-line front end live in the
//! companion `hbtsim-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod counting;
pub mod fock;
pub mod gaussian;
pub mod verify;

mod mat;
mod math;
