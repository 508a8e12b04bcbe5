use alloc::vec::Vec;

use super::CountingError;
use crate::fock::JointPnrDistribution;

/// Per-pulse click probabilities of a threshold detector pair:
/// singles p₁, p₂ and the coincidence p₁₂.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClickTable {
    pub p_click_1: f64,
    pub p_click_2: f64,
    pub p_coincidence: f64,
}

impl ClickTable {
    pub fn new(p1: f64, p2: f64, p12: f64) -> Result<Self, CountingError> {
        for p in [p1, p2, p12] {
            if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                return Err(CountingError::InvalidClickTable {
                    reason: "probabilities must lie in [0, 1]",
                });
            }
        }
        if p12 > p1 + 1e-12 || p12 > p2 + 1e-12 {
            return Err(CountingError::InvalidClickTable {
                reason: "coincidence exceeds a single-detector probability",
            });
        }
        if p1 + p2 - p12 > 1.0 + 1e-12 {
            return Err(CountingError::InvalidClickTable {
                reason: "outcome probabilities exceed unity",
            });
        }
        Ok(ClickTable { p_click_1: p1, p_click_2: p2, p_coincidence: p12 })
    }

    /// Exact threshold-detection probabilities from a joint photon-number
    /// distribution: a detector of efficiency η misses all n photons with
    /// probability (1 − η)ⁿ, so
    /// p_k = 1 − Σ P(n₁,n₂)·(1−η_k)^{n_k} and the coincidence carries both
    /// factors. Pass `efficiencies` only if the joint does not already
    /// contain the detection losses; the distribution's flag enforces this.
    ///
    /// Truncation deficit in the joint is treated as non-clicking, biasing
    /// probabilities down by at most the deficit itself.
    pub fn from_joint(
        joint: &JointPnrDistribution,
        efficiencies: Option<(f64, f64)>,
    ) -> Result<Self, CountingError> {
        let (eta1, eta2) = match efficiencies {
            Some((e1, e2)) => {
                if joint.loss_applied && (e1 < 1.0 || e2 < 1.0) {
                    return Err(CountingError::DoubleEfficiencyApplication);
                }
                for (key, e) in [("eta1", e1), ("eta2", e2)] {
                    if !e.is_finite() || !(0.0..=1.0).contains(&e) {
                        return Err(CountingError::InvalidConfig {
                            key,
                            reason: "efficiency must lie in [0, 1]",
                        });
                    }
                }
                (e1, e2)
            }
            None => (1.0, 1.0),
        };
        let (d1, d2) = joint.dims();
        let miss_1 = no_click_weights(1.0 - eta1, d1);
        let miss_2 = no_click_weights(1.0 - eta2, d2);
        let mut no1 = 0.0;
        let mut no2 = 0.0;
        let mut no_both = 0.0;
        let mut total = 0.0;
        for n1 in 0..d1 {
            for n2 in 0..d2 {
                let p = joint.prob(n1, n2);
                total += p;
                no1 += p * miss_1[n1];
                no2 += p * miss_2[n2];
                no_both += p * miss_1[n1] * miss_2[n2];
            }
        }
        let p1 = (total - no1).clamp(0.0, 1.0);
        let p2 = (total - no2).clamp(0.0, 1.0);
        let p12 = (total - no1 - no2 + no_both).clamp(0.0, 1.0);
        ClickTable::new(p1, p2, p12)
    }

    /// The statistically independent table with the same singles.
    pub fn product_of_marginals(&self) -> ClickTable {
        ClickTable {
            p_click_1: self.p_click_1,
            p_click_2: self.p_click_2,
            p_coincidence: self.p_click_1 * self.p_click_2,
        }
    }

    /// Click-level correlation p₁₂ / (p₁·p₂).
    pub fn g_click(&self) -> Result<f64, CountingError> {
        if self.p_click_1 <= 0.0 || self.p_click_2 <= 0.0 {
            return Err(CountingError::ClickDenominatorZero);
        }
        Ok(self.p_coincidence / (self.p_click_1 * self.p_click_2))
    }
}

/// (1−η)ⁿ for n = 0..dim, built multiplicatively so (1−η)⁰ = 1 exactly.
fn no_click_weights(miss: f64, dim: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(dim);
    let mut acc = 1.0;
    for _ in 0..dim {
        w.push(acc);
        acc *= miss;
    }
    w
}
