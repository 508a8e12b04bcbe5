use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::state::{prepare_coherent, GaussianState};
use super::GaussianError;
use crate::mat::Mat;
use crate::math;

/// One optical element acting on a Gaussian state.
///
/// Conventions, fixed once for the whole crate:
///
/// * `TwoModeSqueezer`: Bogoliubov transform
///   a → a·cosh r − b†·e^{iθ}·sinh r (and symmetrically for b). Only the
///   product of parametric gain and interaction length enters, so a single
///   dimensionless `r` is exposed.
/// * `BeamSplitter`: transmission amplitude 𝒯 = √t_sq real, reflection
///   ℛ = i·√(1 − t_sq). This satisfies 𝒯ℛ* = −ℛ𝒯*, which is what makes the
///   cross terms of the two-detector coincidence cancel; changing it breaks
///   the splitting-ratio invariance of the antinormal correlator.
/// * `Loss`: the Gaussian attenuation channel d → √η·d,
///   Σ → η·Σ + (1−η)/2·I on the mode block. Identical to a beam splitter
///   of transmission η against an unobserved vacuum mode.
/// * `PhaseShift`: a → e^{iφ}·a.
#[derive(Clone, Debug, PartialEq)]
pub enum CircuitElement {
    TwoModeSqueezer { mode_a: usize, mode_b: usize, r: f64, theta: f64 },
    BeamSplitter { mode_a: usize, mode_b: usize, t_sq: f64 },
    Loss { mode: usize, eta: f64 },
    PhaseShift { mode: usize, phi: f64 },
}

impl CircuitElement {
    /// Validate mode indices and parameter ranges against a mode count.
    pub fn validate(&self, mode_count: usize) -> Result<(), GaussianError> {
        let check = |mode: usize| {
            if mode < mode_count {
                Ok(())
            } else {
                Err(GaussianError::InvalidMode { mode, mode_count })
            }
        };
        match *self {
            CircuitElement::TwoModeSqueezer { mode_a, mode_b, r, theta } => {
                check(mode_a)?;
                check(mode_b)?;
                if mode_a == mode_b {
                    return Err(GaussianError::DuplicateMode { mode: mode_a });
                }
                if !r.is_finite() || r < 0.0 {
                    return Err(GaussianError::ParameterOutOfRange { name: "r", value: r });
                }
                if !theta.is_finite() {
                    return Err(GaussianError::ParameterOutOfRange { name: "theta", value: theta });
                }
                Ok(())
            }
            CircuitElement::BeamSplitter { mode_a, mode_b, t_sq } => {
                check(mode_a)?;
                check(mode_b)?;
                if mode_a == mode_b {
                    return Err(GaussianError::DuplicateMode { mode: mode_a });
                }
                if !(0.0..=1.0).contains(&t_sq) {
                    return Err(GaussianError::ParameterOutOfRange { name: "t_sq", value: t_sq });
                }
                Ok(())
            }
            CircuitElement::Loss { mode, eta } => {
                check(mode)?;
                if !(0.0..=1.0).contains(&eta) {
                    return Err(GaussianError::ParameterOutOfRange { name: "eta", value: eta });
                }
                Ok(())
            }
            CircuitElement::PhaseShift { mode, phi } => {
                check(mode)?;
                if !phi.is_finite() {
                    return Err(GaussianError::ParameterOutOfRange { name: "phi", value: phi });
                }
                Ok(())
            }
        }
    }

    /// Symplectic matrix of the element. Loss is a channel, not a symplectic
    /// map, and is handled separately.
    fn symplectic(&self, mode_count: usize) -> Option<Mat> {
        let mut s = Mat::identity(2 * mode_count);
        match *self {
            CircuitElement::TwoModeSqueezer { mode_a, mode_b, r, theta } => {
                let (xa, pa) = (2 * mode_a, 2 * mode_a + 1);
                let (xb, pb) = (2 * mode_b, 2 * mode_b + 1);
                let c = math::cosh(r);
                let sh = math::sinh(r);
                let (ct, st) = (math::cos(theta), math::sin(theta));
                s.set(xa, xa, c);
                s.set(xa, xb, -sh * ct);
                s.set(xa, pb, -sh * st);
                s.set(pa, pa, c);
                s.set(pa, xb, -sh * st);
                s.set(pa, pb, sh * ct);
                s.set(xb, xb, c);
                s.set(xb, xa, -sh * ct);
                s.set(xb, pa, -sh * st);
                s.set(pb, pb, c);
                s.set(pb, xa, -sh * st);
                s.set(pb, pa, sh * ct);
                Some(s)
            }
            CircuitElement::BeamSplitter { mode_a, mode_b, t_sq } => {
                let (xi, pi) = (2 * mode_a, 2 * mode_a + 1);
                let (xj, pj) = (2 * mode_b, 2 * mode_b + 1);
                let t = math::sqrt(t_sq);
                let rr = math::sqrt(1.0 - t_sq);
                s.set(xi, xi, t);
                s.set(xi, pj, -rr);
                s.set(pi, pi, t);
                s.set(pi, xj, rr);
                s.set(xj, xj, t);
                s.set(xj, pi, -rr);
                s.set(pj, pj, t);
                s.set(pj, xi, rr);
                Some(s)
            }
            CircuitElement::PhaseShift { mode, phi } => {
                let (x, p) = (2 * mode, 2 * mode + 1);
                let (c, sn) = (math::cos(phi), math::sin(phi));
                s.set(x, x, c);
                s.set(x, p, -sn);
                s.set(p, x, sn);
                s.set(p, p, c);
                Some(s)
            }
            CircuitElement::Loss { .. } => None,
        }
    }
}

/// Apply one element to a state, returning the evolved state.
pub fn apply_element(
    state: &GaussianState,
    element: &CircuitElement,
) -> Result<GaussianState, GaussianError> {
    element.validate(state.mode_count())?;
    let mut out = state.clone();
    match element.symplectic(state.mode_count()) {
        Some(s) => {
            *out.disp_mut() = s.mul_vec(state.displacement());
            let mut new_cov = s.mul(state.cov_ref()).mul_transpose(&s);
            new_cov.symmetrize();
            out.replace_cov(new_cov);
        }
        None => {
            let (mode, eta) = match *element {
                CircuitElement::Loss { mode, eta } => (mode, eta),
                _ => unreachable!(),
            };
            let root = math::sqrt(eta);
            let n = 2 * state.mode_count();
            let (x, p) = (2 * mode, 2 * mode + 1);
            out.disp_mut()[x] *= root;
            out.disp_mut()[p] *= root;
            let cov = out.cov_mut();
            // Scale the mode's rows and columns by √η (diagonal block picks
            // up η), then restore the vacuum noise floor of the lost share.
            for k in 0..n {
                for q in [x, p] {
                    cov.set(q, k, cov.get(q, k) * root);
                    cov.set(k, q, cov.get(k, q) * root);
                }
            }
            cov.add_to(x, x, (1.0 - eta) * 0.5);
            cov.add_to(p, p, (1.0 - eta) * 0.5);
        }
    }
    Ok(out)
}

/// An ordered optical network with named modes.
#[derive(Clone, Debug)]
pub struct Circuit {
    mode_count: usize,
    elements: Vec<CircuitElement>,
    labels: Vec<(String, usize)>,
}

impl Circuit {
    pub fn new(mode_count: usize) -> Self {
        Circuit { mode_count, elements: Vec::new(), labels: Vec::new() }
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn elements(&self) -> &[CircuitElement] {
        &self.elements
    }

    pub fn push(&mut self, element: CircuitElement) -> Result<(), GaussianError> {
        element.validate(self.mode_count)?;
        self.elements.push(element);
        Ok(())
    }

    /// Register a mode label. The map must stay injective in both
    /// directions: no duplicate names, no index named twice.
    pub fn add_label(&mut self, name: &str, mode: usize) -> Result<(), GaussianError> {
        if mode >= self.mode_count {
            return Err(GaussianError::InvalidMode { mode, mode_count: self.mode_count });
        }
        if self.labels.iter().any(|(n, m)| n == name || *m == mode) {
            return Err(GaussianError::LabelNotInjective);
        }
        self.labels.push((String::from(name), mode));
        Ok(())
    }

    pub fn mode_by_label(&self, name: &str) -> Option<usize> {
        self.labels.iter().find(|(n, _)| n == name).map(|(_, m)| *m)
    }

    pub fn labels(&self) -> &[(String, usize)] {
        &self.labels
    }
}

/// Run every element of a circuit over an input state.
pub fn apply_circuit(
    state: &GaussianState,
    circuit: &Circuit,
) -> Result<GaussianState, GaussianError> {
    if state.mode_count() != circuit.mode_count() {
        return Err(GaussianError::DimensionMismatch);
    }
    let mut s = state.clone();
    for el in circuit.elements() {
        s = apply_element(&s, el)?;
    }
    Ok(s)
}

/// Parameters of the stimulated down-conversion HBT correlator circuit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HbtParams {
    /// Squeeze parameter of the parametric interaction.
    pub r: f64,
    /// Pump phase of the parametric interaction, radians.
    pub theta: f64,
    /// Transmittance |𝒯|² of the monitored beam splitter.
    pub t_sq: f64,
    /// Total detection efficiency in front of detector 1.
    pub eta1: f64,
    /// Total detection efficiency in front of detector 2.
    pub eta2: f64,
    /// Complex amplitude of the coherent signal seeding the amplifier.
    pub input_amplitude: Complex64,
}

impl HbtParams {
    pub fn validate(&self) -> Result<(), GaussianError> {
        if !self.r.is_finite() || self.r < 0.0 {
            return Err(GaussianError::ParameterOutOfRange { name: "r", value: self.r });
        }
        if !self.theta.is_finite() {
            return Err(GaussianError::ParameterOutOfRange { name: "theta", value: self.theta });
        }
        if !(0.0..=1.0).contains(&self.t_sq) {
            return Err(GaussianError::ParameterOutOfRange { name: "t_sq", value: self.t_sq });
        }
        if !(0.0..=1.0).contains(&self.eta1) {
            return Err(GaussianError::ParameterOutOfRange { name: "eta1", value: self.eta1 });
        }
        if !(0.0..=1.0).contains(&self.eta2) {
            return Err(GaussianError::ParameterOutOfRange { name: "eta2", value: self.eta2 });
        }
        if !self.input_amplitude.re.is_finite() || !self.input_amplitude.im.is_finite() {
            return Err(GaussianError::ParameterOutOfRange {
                name: "input_amplitude",
                value: f64::NAN,
            });
        }
        Ok(())
    }

    /// Mean photon number of the coherent input.
    pub fn input_mean_photon(&self) -> f64 {
        self.input_amplitude.norm_sqr()
    }
}

/// Mode carrying the field seen by detector 1 after evolution.
pub const D1_MODE: usize = 1;
/// Mode carrying the field seen by detector 2 after evolution.
pub const D2_MODE: usize = 2;

/// Build the stimulated-amplifier HBT correlator and evolve its input.
///
/// Five physical modes: the signal `a_in`, the idler-side input `b_in`, the
/// empty splitter port `v`, and the two loss ports `v1`, `v2`. The amplified
/// idler output is split on the monitored beam splitter; the detection
/// inefficiencies η₁, η₂ are dilated as beam splitters against `v1`/`v2`.
/// After evolution, mode [`D1_MODE`] is the field at detector 1 and
/// [`D2_MODE`] the field at detector 2.
pub fn build_hbt_circuit(params: &HbtParams) -> Result<(Circuit, GaussianState), GaussianError> {
    params.validate()?;
    let mut circuit = Circuit::new(5);
    circuit.add_label("a_in", 0)?;
    circuit.add_label("b_in", 1)?;
    circuit.add_label("v", 2)?;
    circuit.add_label("v1", 3)?;
    circuit.add_label("v2", 4)?;
    circuit.push(CircuitElement::TwoModeSqueezer {
        mode_a: 0,
        mode_b: 1,
        r: params.r,
        theta: params.theta,
    })?;
    circuit.push(CircuitElement::BeamSplitter { mode_a: 1, mode_b: 2, t_sq: params.t_sq })?;
    circuit.push(CircuitElement::BeamSplitter { mode_a: D1_MODE, mode_b: 3, t_sq: params.eta1 })?;
    circuit.push(CircuitElement::BeamSplitter { mode_a: D2_MODE, mode_b: 4, t_sq: params.eta2 })?;

    let zero = Complex64::new(0.0, 0.0);
    let input = prepare_coherent(5, &[params.input_amplitude, zero, zero, zero, zero])?;
    let evolved = apply_circuit(&input, &circuit)?;
    Ok((circuit, evolved))
}
