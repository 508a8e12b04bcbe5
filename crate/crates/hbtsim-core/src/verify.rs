//! Cross-checks between the Gaussian engine, the Fock oracle and the
//! click-level counting model.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::counting::{ClickTable, CountingError};
use crate::fock::{self, FockError, LossHandling};
use crate::gaussian::{
    self, build_hbt_circuit, GaussianError, HbtParams, D1_MODE, D2_MODE,
};
use crate::math;

/// Antinormally ordered autocorrelation of a coherent state with mean
/// photon number `n`: (n² + 4n + 2) / (n + 1)².
pub fn coherent_antinormal_g(n: f64) -> f64 {
    (n * n + 4.0 * n + 2.0) / ((n + 1.0) * (n + 1.0))
}

/// Detector-mode moments extracted from one side of a comparison.
#[derive(Clone, Copy, Debug)]
pub struct MomentSet {
    pub mean_1: f64,
    pub mean_2: f64,
    pub product: f64,
    pub g: f64,
}

/// One point of the Gaussian-vs-Fock equivalence check.
#[derive(Clone, Copy, Debug)]
pub struct OracleComparison {
    pub r: f64,
    pub n: f64,
    pub gaussian: MomentSet,
    pub fock: MomentSet,
    /// Total truncation deficit reported by the Fock run.
    pub deficit: f64,
    /// Scaled tolerance the comparison is held to: max(1e-6, 10·deficit).
    pub tolerance: f64,
    /// Worst |Δ| / max(1, |value|) over the four compared quantities.
    pub max_scaled_error: f64,
}

impl OracleComparison {
    pub fn passes(&self) -> bool {
        self.max_scaled_error <= self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum VerifyError {
    Gaussian(GaussianError),
    Fock(FockError),
    Counting(CountingError),
}

impl core::fmt::Display for VerifyError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            VerifyError::Gaussian(e) => write!(f, "gaussian side: {e}"),
            VerifyError::Fock(e) => write!(f, "fock side: {e}"),
            VerifyError::Counting(e) => write!(f, "counting side: {e}"),
        }
    }
}

impl core::error::Error for VerifyError {}

impl From<GaussianError> for VerifyError {
    fn from(e: GaussianError) -> Self {
        VerifyError::Gaussian(e)
    }
}

impl From<FockError> for VerifyError {
    fn from(e: FockError) -> Self {
        VerifyError::Fock(e)
    }
}

impl From<CountingError> for VerifyError {
    fn from(e: CountingError) -> Self {
        VerifyError::Counting(e)
    }
}

/// Run both engines on the same correlator circuit and compare detector
/// means, the coincidence moment and g.
pub fn compare_hbt_circuit(
    params: &HbtParams,
    budget: f64,
) -> Result<OracleComparison, VerifyError> {
    let (_, state) = build_hbt_circuit(params)?;
    let g_mean_1 = gaussian::mean_photon(&state, D1_MODE)?;
    let g_mean_2 = gaussian::mean_photon(&state, D2_MODE)?;
    let g_product = gaussian::photon_number_product(&state, D1_MODE, D2_MODE)?;
    let g_side = MomentSet {
        mean_1: g_mean_1,
        mean_2: g_mean_2,
        product: g_product,
        g: gaussian::hbt_correlator(&state, D1_MODE, D2_MODE)?,
    };

    let joint = fock::hbt_joint(params, budget, LossHandling::Dilated)?;
    let f_mean_1 = joint.mean_1();
    let f_mean_2 = joint.mean_2();
    let f_product = joint.product_moment();
    let f_side = MomentSet {
        mean_1: f_mean_1,
        mean_2: f_mean_2,
        product: f_product,
        g: f_product / (f_mean_1 * f_mean_2),
    };

    let deficit = joint.deficit;
    let tolerance = (10.0 * deficit).max(1e-6);
    let pairs = [
        (g_side.mean_1, f_side.mean_1),
        (g_side.mean_2, f_side.mean_2),
        (g_side.product, f_side.product),
        (g_side.g, f_side.g),
    ];
    let max_scaled_error = pairs
        .iter()
        .map(|(a, b)| math::fabs(a - b) / math::fabs(a.abs().max(b.abs()).max(1.0)))
        .fold(0.0_f64, f64::max);

    Ok(OracleComparison {
        r: params.r,
        n: params.input_mean_photon(),
        gaussian: g_side,
        fock: f_side,
        deficit,
        tolerance,
        max_scaled_error,
    })
}

/// The full equivalence grid over squeeze parameters and input intensities.
pub fn oracle_equivalence_grid(
    rs: &[f64],
    ns: &[f64],
    base: &HbtParams,
    budget: f64,
) -> Result<Vec<OracleComparison>, VerifyError> {
    let mut out = Vec::with_capacity(rs.len() * ns.len());
    for &r in rs {
        for &n in ns {
            let params = HbtParams {
                r,
                input_amplitude: Complex64::new(math::sqrt(n), 0.0),
                ..*base
            };
            out.push(compare_hbt_circuit(&params, budget)?);
        }
    }
    Ok(out)
}

/// One point of the click-vs-photon-correlator diagnostic.
#[derive(Clone, Copy, Debug)]
pub struct ClickBiasPoint {
    pub r: f64,
    /// Per-pulse click probability at detector 1.
    pub p_click_1: f64,
    /// Click-level correlation p₁₂ / (p₁·p₂) at full indistinguishability.
    pub g_click: f64,
    /// Photon-number correlator that the click estimate approximates.
    pub g_photon: f64,
    /// Relative bias (g_click − g_photon) / g_photon.
    pub relative_bias: f64,
}

/// Diagnostic for the threshold-detector bias: exact click expectations of
/// the correlator circuit vs the photon-number correlator, as a function of
/// flux (swept through the squeeze parameter). The bias grows monotonically
/// with flux and stays below ~2% while per-pulse click probabilities are
/// under 5%.
pub fn click_bias_scan(
    n: f64,
    rs: &[f64],
    t_sq: f64,
    eta: f64,
    budget: f64,
) -> Result<Vec<ClickBiasPoint>, VerifyError> {
    let g_photon = coherent_antinormal_g(n);
    let mut out = Vec::with_capacity(rs.len());
    for &r in rs {
        let params = HbtParams {
            r,
            theta: 0.0,
            t_sq,
            eta1: eta,
            eta2: eta,
            input_amplitude: Complex64::new(math::sqrt(n), 0.0),
        };
        let joint = fock::hbt_joint(&params, budget, LossHandling::Excluded)?;
        let table = ClickTable::from_joint(&joint, Some((eta, eta)))?;
        let g_click = table.g_click()?;
        out.push(ClickBiasPoint {
            r,
            p_click_1: table.p_click_1,
            g_click,
            g_photon,
            relative_bias: (g_click - g_photon) / g_photon,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        math::fabs(a - b) <= tol
    }

    #[test]
    fn closed_form_anchor_values() {
        assert!(close(coherent_antinormal_g(0.0), 2.0, 1e-15));
        assert!(close(coherent_antinormal_g(1.0), 1.75, 1e-15));
        assert!(close(coherent_antinormal_g(7.72), 1.21621, 1e-5));
    }

    #[test]
    fn oracle_agreement_at_moderate_gain() {
        let base = HbtParams {
            r: 0.1,
            theta: 0.0,
            t_sq: 0.5,
            eta1: 0.55,
            eta2: 0.85,
            input_amplitude: Complex64::new(0.0, 0.0),
        };
        let grid = oracle_equivalence_grid(&[0.1], &[0.0, 1.0], &base, 1e-8).unwrap();
        for cmp in grid {
            assert!(
                cmp.passes(),
                "r={} n={}: scaled error {} over tolerance {}",
                cmp.r,
                cmp.n,
                cmp.max_scaled_error,
                cmp.tolerance
            );
        }
    }

    #[test]
    fn click_bias_grows_with_flux_and_stays_small_at_low_flux() {
        let rs = [0.02, 0.05, 0.1, 0.2, 0.35];
        let scan = click_bias_scan(1.09, &rs, 0.5, 0.55, 1e-8).unwrap();
        let mut prev = 0.0;
        for point in &scan {
            let bias = math::fabs(point.relative_bias);
            assert!(bias >= prev - 1e-12, "bias must grow with flux");
            prev = bias;
            if point.p_click_1 < 0.05 {
                assert!(bias < 0.02, "bias {bias} too large at p1 = {}", point.p_click_1);
            }
        }
    }
}
