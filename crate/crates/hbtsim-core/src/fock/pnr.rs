//! Joint photon-number distributions and number-basis moments.

use alloc::vec::Vec;

use super::state::FockState;
use super::FockError;

/// Joint photon-number distribution of a mode pair with every other mode
/// (including loss ancillas) traced out.
#[derive(Clone, Debug)]
pub struct JointPnrDistribution {
    pub mode_1: usize,
    pub mode_2: usize,
    dim_1: usize,
    dim_2: usize,
    p: Vec<f64>,
    /// Truncation deficit carried over from the state: 1 − ΣP.
    pub deficit: f64,
    /// Whether detection losses were already dilated into the distribution.
    /// Guards against applying efficiencies twice downstream.
    pub loss_applied: bool,
}

impl JointPnrDistribution {
    pub fn from_parts(
        mode_1: usize,
        mode_2: usize,
        dim_1: usize,
        dim_2: usize,
        p: Vec<f64>,
        loss_applied: bool,
    ) -> Result<Self, FockError> {
        if p.len() != dim_1 * dim_2 {
            return Err(FockError::DimensionMismatch);
        }
        let mut total = 0.0;
        for &v in &p {
            if !v.is_finite() || v < -1e-15 {
                return Err(FockError::NonFiniteAmplitude);
            }
            total += v;
        }
        if total > 1.0 + 1e-9 {
            return Err(FockError::BadNorm { norm_sqr: total });
        }
        Ok(JointPnrDistribution {
            mode_1,
            mode_2,
            dim_1,
            dim_2,
            p,
            deficit: (1.0 - total).max(0.0),
            loss_applied,
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_1, self.dim_2)
    }

    pub fn prob(&self, n1: usize, n2: usize) -> f64 {
        self.p[n1 * self.dim_2 + n2]
    }

    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }

    pub fn marginal_1(&self) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.dim_1];
        for n1 in 0..self.dim_1 {
            for n2 in 0..self.dim_2 {
                out[n1] += self.prob(n1, n2);
            }
        }
        out
    }

    pub fn marginal_2(&self) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.dim_2];
        for n1 in 0..self.dim_1 {
            for n2 in 0..self.dim_2 {
                out[n2] += self.prob(n1, n2);
            }
        }
        out
    }

    pub fn mean_1(&self) -> f64 {
        self.marginal_1().iter().enumerate().map(|(n, p)| n as f64 * p).sum()
    }

    pub fn mean_2(&self) -> f64 {
        self.marginal_2().iter().enumerate().map(|(n, p)| n as f64 * p).sum()
    }

    /// ⟨n₁·n₂⟩ over the joint distribution.
    pub fn product_moment(&self) -> f64 {
        let mut acc = 0.0;
        for n1 in 1..self.dim_1 {
            for n2 in 1..self.dim_2 {
                acc += (n1 * n2) as f64 * self.prob(n1, n2);
            }
        }
        acc
    }
}

/// Joint photon-number distribution of two modes of a state.
pub fn joint_pnr(
    state: &FockState,
    mode_1: usize,
    mode_2: usize,
) -> Result<JointPnrDistribution, FockError> {
    state.check_mode(mode_1)?;
    state.check_mode(mode_2)?;
    if mode_1 == mode_2 {
        return Err(FockError::DuplicateMode { mode: mode_1 });
    }
    let p = state.joint_marginal(mode_1, mode_2);
    let mut joint = JointPnrDistribution::from_parts(
        mode_1,
        mode_2,
        state.dim(mode_1),
        state.dim(mode_2),
        p,
        false,
    )?;
    // Report the state's full truncation estimate, not just 1 − ΣP.
    joint.deficit = joint.deficit.max(state.total_deficit());
    Ok(joint)
}

/// Antinormally ordered fourth moment ⟨a a a† a†⟩ of one mode, evaluated as
/// Σ (n+1)(n+2)·P(n) over the marginal.
///
/// Because the weight grows like n², the mode needs head-room: the top two
/// occupancy layers must be empty up to the truncation budget, otherwise
/// hidden tail mass could be amplified past it.
pub fn antinormal_fourth_moment(state: &FockState, mode: usize) -> Result<f64, FockError> {
    state.check_mode(mode)?;
    let marginal = state.marginal(mode);
    let cutoff = state.cutoff(mode);
    let top_layers: f64 = marginal.iter().rev().take(2.min(marginal.len())).sum();
    let headroom_deficit = top_layers + state.total_deficit();
    if headroom_deficit > state.budget() {
        return Err(FockError::TruncationBudgetExceeded {
            deficit: headroom_deficit,
            budget: state.budget(),
        });
    }
    let _ = cutoff;
    Ok(marginal
        .iter()
        .enumerate()
        .map(|(n, p)| ((n + 1) * (n + 2)) as f64 * p)
        .sum())
}
