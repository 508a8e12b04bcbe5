//! Circuit elements on the truncated Fock basis.
//!
//! Each two-mode element is the exponential of its quadratic generator,
//! evaluated by scaled Taylor with norm control, applied matrix-free to the
//! element's two-mode sector of the amplitude tensor. The truncated
//! generators stay anti-Hermitian, so the evolution is exactly unitary on
//! the truncated space; truncation error shows up as probability mass
//! pushed against a cutoff boundary, which [`FockState::boundary_mass`]
//! measures and the budget check rejects.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::state::FockState;
use super::FockError;
use crate::gaussian::CircuitElement;
use crate::math;

const MAX_TAYLOR_TERMS: usize = 64;

/// Coefficients of a two-mode quadratic generator
/// G = rr·a†b† + ll·ab + rl·a†b + lr·ab†.
#[derive(Clone, Copy)]
struct PairGenerator {
    raise_raise: Complex64,
    lower_lower: Complex64,
    raise_lower: Complex64,
    lower_raise: Complex64,
}

impl PairGenerator {
    fn scaled(&self, s: f64) -> PairGenerator {
        PairGenerator {
            raise_raise: self.raise_raise * s,
            lower_lower: self.lower_lower * s,
            raise_lower: self.raise_lower * s,
            lower_raise: self.lower_raise * s,
        }
    }

    /// Crude operator-norm bound used to pick the Taylor scaling.
    fn norm_bound(&self, dim_a: usize, dim_b: usize) -> f64 {
        let amp = self.raise_raise.norm()
            + self.lower_lower.norm()
            + self.raise_lower.norm()
            + self.lower_raise.norm();
        amp * math::sqrt((dim_a * dim_b) as f64)
    }
}

/// Base offsets of every joint configuration of the modes other than
/// (mode_a, mode_b); adding n_a·stride_a + n_b·stride_b reaches any index.
fn rest_offsets(state: &FockState, mode_a: usize, mode_b: usize) -> Vec<usize> {
    let strides = state.strides();
    let mut offsets = vec![0usize];
    for m in 0..state.mode_count() {
        if m == mode_a || m == mode_b {
            continue;
        }
        let dim = state.dim(m);
        let stride = strides[m];
        let mut next = Vec::with_capacity(offsets.len() * dim);
        for &base in &offsets {
            for n in 0..dim {
                next.push(base + n * stride);
            }
        }
        offsets = next;
    }
    offsets
}

/// dst = G·src on the (mode_a, mode_b) sector. `dst` must be zeroed.
#[allow(clippy::too_many_arguments)]
fn apply_pair_generator(
    dst: &mut [Complex64],
    src: &[Complex64],
    gen: &PairGenerator,
    rests: &[usize],
    stride_a: usize,
    stride_b: usize,
    dim_a: usize,
    dim_b: usize,
    sqrt_table: &[f64],
) {
    let zero = Complex64::new(0.0, 0.0);
    let use_rr = gen.raise_raise != zero;
    let use_ll = gen.lower_lower != zero;
    let use_rl = gen.raise_lower != zero;
    let use_lr = gen.lower_raise != zero;
    for &base in rests {
        for na in 0..dim_a {
            let row = base + na * stride_a;
            for nb in 0..dim_b {
                let idx = row + nb * stride_b;
                let amp = src[idx];
                if amp.re == 0.0 && amp.im == 0.0 {
                    continue;
                }
                if use_rr && na + 1 < dim_a && nb + 1 < dim_b {
                    dst[idx + stride_a + stride_b] +=
                        gen.raise_raise * (sqrt_table[na + 1] * sqrt_table[nb + 1]) * amp;
                }
                if use_ll && na > 0 && nb > 0 {
                    dst[idx - stride_a - stride_b] +=
                        gen.lower_lower * (sqrt_table[na] * sqrt_table[nb]) * amp;
                }
                if use_rl && na + 1 < dim_a && nb > 0 {
                    dst[idx + stride_a - stride_b] +=
                        gen.raise_lower * (sqrt_table[na + 1] * sqrt_table[nb]) * amp;
                }
                if use_lr && na > 0 && nb + 1 < dim_b {
                    dst[idx - stride_a + stride_b] +=
                        gen.lower_raise * (sqrt_table[na] * sqrt_table[nb + 1]) * amp;
                }
            }
        }
    }
}

/// exp(G)·ψ by scaling and repeated machine-precision Taylor factors.
fn expm_apply_pair(
    state: &FockState,
    mode_a: usize,
    mode_b: usize,
    gen: PairGenerator,
) -> Result<FockState, FockError> {
    state.check_mode(mode_a)?;
    state.check_mode(mode_b)?;
    if mode_a == mode_b {
        return Err(FockError::DuplicateMode { mode: mode_a });
    }
    let strides = state.strides();
    let (dim_a, dim_b) = (state.dim(mode_a), state.dim(mode_b));
    let max_dim = state.cutoffs().iter().map(|c| c + 1).max().unwrap_or(1);
    let sqrt_table: Vec<f64> = (0..=max_dim).map(|k| math::sqrt(k as f64)).collect();
    let rests = rest_offsets(state, mode_a, mode_b);

    let bound = gen.norm_bound(dim_a, dim_b);
    let mut halvings = 0u32;
    while bound / libm::exp2(halvings as f64) > 0.5 {
        halvings += 1;
        if halvings > 40 {
            return Err(FockError::NoConvergence);
        }
    }
    let factor_gen = gen.scaled(1.0 / libm::exp2(halvings as f64));

    let mut psi = state.amps().to_vec();
    let mut term = vec![Complex64::new(0.0, 0.0); psi.len()];
    let mut next = vec![Complex64::new(0.0, 0.0); psi.len()];
    for _ in 0..(1u64 << halvings) {
        // One Taylor factor: acc = Σ_k G^k ψ / k!.
        term.copy_from_slice(&psi);
        let mut converged = false;
        for k in 1..=MAX_TAYLOR_TERMS {
            next.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            apply_pair_generator(
                &mut next,
                &term,
                &factor_gen,
                &rests,
                strides[mode_a],
                strides[mode_b],
                dim_a,
                dim_b,
                &sqrt_table,
            );
            let scale = 1.0 / k as f64;
            let mut term_norm = 0.0;
            for (t, n) in term.iter_mut().zip(next.iter()) {
                *t = n * scale;
                term_norm += t.norm_sqr();
            }
            let mut acc_norm = 0.0;
            for (p, t) in psi.iter_mut().zip(term.iter()) {
                *p += t;
                acc_norm += p.norm_sqr();
            }
            if term_norm <= 1e-34 * acc_norm.max(1e-300) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(FockError::NoConvergence);
        }
    }
    Ok(state.with_amps(psi))
}

/// Two-mode squeezer exp(ξ·a†b† − ξ*·ab) with ξ = −r·e^{iθ}, matching the
/// Bogoliubov convention of the Gaussian engine
/// (a → a·cosh r − b†·e^{iθ}·sinh r).
pub fn apply_two_mode_squeezer(
    state: &FockState,
    mode_a: usize,
    mode_b: usize,
    r: f64,
    theta: f64,
) -> Result<FockState, FockError> {
    CircuitElement::TwoModeSqueezer { mode_a, mode_b, r, theta }
        .validate(state.mode_count())?;
    let xi = -Complex64::new(math::cos(theta), math::sin(theta)) * r;
    let gen = PairGenerator {
        raise_raise: xi,
        lower_lower: -xi.conj(),
        raise_lower: Complex64::new(0.0, 0.0),
        lower_raise: Complex64::new(0.0, 0.0),
    };
    let out = expm_apply_pair(state, mode_a, mode_b, gen)?;
    out.check_budget()?;
    Ok(out)
}

/// Beam splitter exp(iθ(a†b + ab†)) with θ = arccos(√t_sq): transmission
/// amplitude √t_sq, reflection i·√(1 − t_sq). Conserves total photon
/// number per sector exactly (the generator is block diagonal and matrix
/// products preserve the block pattern bit-for-bit).
pub fn apply_beam_splitter(
    state: &FockState,
    mode_a: usize,
    mode_b: usize,
    t_sq: f64,
) -> Result<FockState, FockError> {
    CircuitElement::BeamSplitter { mode_a, mode_b, t_sq }.validate(state.mode_count())?;
    let theta = math::acos(math::sqrt(t_sq));
    let coeff = Complex64::new(0.0, theta);
    let gen = PairGenerator {
        raise_raise: Complex64::new(0.0, 0.0),
        lower_lower: Complex64::new(0.0, 0.0),
        raise_lower: coeff,
        lower_raise: coeff,
    };
    let out = expm_apply_pair(state, mode_a, mode_b, gen)?;
    out.check_budget()?;
    Ok(out)
}

/// Phase shift a → e^{iφ}a: the diagonal e^{i·n·φ} on one mode.
pub fn apply_phase(state: &FockState, mode: usize, phi: f64) -> Result<FockState, FockError> {
    CircuitElement::PhaseShift { mode, phi }.validate(state.mode_count())?;
    let strides = state.strides();
    let dim = state.dim(mode);
    let phases: Vec<Complex64> = (0..dim)
        .map(|n| Complex64::new(math::cos(n as f64 * phi), math::sin(n as f64 * phi)))
        .collect();
    let mut amps = state.amps().to_vec();
    for (idx, amp) in amps.iter_mut().enumerate() {
        let n = (idx / strides[mode]) % dim;
        *amp *= phases[n];
    }
    Ok(state.with_amps(amps))
}

/// Loss dilated as a beam splitter of transmission η against an appended
/// vacuum ancilla of the given cutoff. The ancilla becomes the last mode
/// and is traced out wherever distributions are extracted, so existing mode
/// indices stay valid.
pub fn apply_loss(
    state: &FockState,
    mode: usize,
    eta: f64,
    ancilla_cutoff: usize,
) -> Result<FockState, FockError> {
    CircuitElement::Loss { mode, eta }.validate(state.mode_count())?;
    let extended = state.append_vacuum_mode(ancilla_cutoff)?;
    let ancilla = extended.mode_count() - 1;
    let out = apply_beam_splitter(&extended, mode, ancilla, eta)?;
    out.check_budget()?;
    Ok(out)
}

/// Map one Gaussian-engine circuit element onto the Fock basis. Loss
/// ancillas get the lossy mode's own cutoff, which is always sufficient.
pub fn apply_element(state: &FockState, element: &CircuitElement) -> Result<FockState, FockError> {
    match *element {
        CircuitElement::TwoModeSqueezer { mode_a, mode_b, r, theta } => {
            apply_two_mode_squeezer(state, mode_a, mode_b, r, theta)
        }
        CircuitElement::BeamSplitter { mode_a, mode_b, t_sq } => {
            apply_beam_splitter(state, mode_a, mode_b, t_sq)
        }
        CircuitElement::Loss { mode, eta } => {
            state.check_mode(mode)?;
            apply_loss(state, mode, eta, state.cutoff(mode))
        }
        CircuitElement::PhaseShift { mode, phi } => apply_phase(state, mode, phi),
    }
}

/// Run a whole circuit from coherent inputs at the given per-mode cutoffs.
pub fn run_circuit(
    circuit: &crate::gaussian::Circuit,
    amplitudes: &[Complex64],
    cutoffs: &[usize],
    budget: f64,
) -> Result<FockState, FockError> {
    if amplitudes.len() != circuit.mode_count() || cutoffs.len() != circuit.mode_count() {
        return Err(FockError::DimensionMismatch);
    }
    let mut state = FockState::product_coherent(amplitudes, cutoffs, budget)?;
    for element in circuit.elements() {
        state = apply_element(&state, element)?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::state::FockState;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        math::fabs(a - b) <= tol
    }

    fn vacuum2(cutoff: usize) -> FockState {
        FockState::vacuum(&[cutoff, cutoff], 1e-8).unwrap()
    }

    #[test]
    fn squeezed_vacuum_amplitudes_match_closed_form() {
        // S|00⟩ = (1/cosh r)·Σ (−e^{iθ}·tanh r)^n |nn⟩.
        let r = 0.1;
        let s = apply_two_mode_squeezer(&vacuum2(12), 0, 1, r, 0.0).unwrap();
        let p00 = s.amplitude(&[0, 0]).norm_sqr();
        let p11 = s.amplitude(&[1, 1]).norm_sqr();
        let ch2 = math::cosh(r) * math::cosh(r);
        let th2 = math::tanh(r) * math::tanh(r);
        assert!(close(p00, 1.0 / ch2, 1e-12));
        assert!(close(p00, 0.990066, 1e-6));
        assert!(close(p11, th2 / ch2, 1e-12));
        assert!(close(p11, 9.83501e-3, 1e-8));
        // Pair emission symmetry: no off-diagonal population.
        for n1 in 0..=4usize {
            for n2 in 0..=4usize {
                if n1 != n2 {
                    assert!(s.amplitude(&[n1, n2]).norm_sqr() < 1e-28);
                }
            }
        }
        // Phase convention: amplitude sign alternates as (−tanh r)^n.
        assert!(s.amplitude(&[1, 1]).re < 0.0);
        assert!(s.amplitude(&[2, 2]).re > 0.0);
    }

    #[test]
    fn zero_gain_squeezer_is_identity() {
        let s = FockState::product_coherent(
            &[Complex64::new(0.7, -0.2), Complex64::new(0.0, 0.0)],
            &[10, 10],
            1e-8,
        )
        .unwrap();
        let out = apply_two_mode_squeezer(&s, 0, 1, 0.0, 1.3).unwrap();
        for (a, b) in s.amps().iter().zip(out.amps().iter()) {
            assert!(close((a - b).norm_sqr(), 0.0, 1e-28));
        }
    }

    #[test]
    fn evolution_is_unitary_on_truncated_space() {
        let s = FockState::product_coherent(
            &[Complex64::new(1.1, 0.3), Complex64::new(0.0, 0.0)],
            &[20, 14],
            1e-6,
        )
        .unwrap();
        let n0 = s.norm_sqr();
        let sq = apply_two_mode_squeezer(&s, 0, 1, 0.35, 0.9).unwrap();
        assert!(close(sq.norm_sqr(), n0, 1e-12));
        let bs = apply_beam_splitter(&sq, 0, 1, 0.33).unwrap();
        assert!(close(bs.norm_sqr(), n0, 1e-12));
    }

    #[test]
    fn single_photon_splits_evenly() {
        let mut amps = vec![Complex64::new(0.0, 0.0); 9];
        amps[3] = Complex64::new(1.0, 0.0); // |1,0⟩ at cutoffs [2,2]
        let s = FockState::from_amplitudes(&[2, 2], amps, 1e-8).unwrap();
        let out = apply_beam_splitter(&s, 0, 1, 0.5).unwrap();
        let p10 = out.amplitude(&[1, 0]).norm_sqr();
        let p01 = out.amplitude(&[0, 1]).norm_sqr();
        assert!(close(p10, 0.5, 1e-12));
        assert!(close(p01, 0.5, 1e-12));
    }

    #[test]
    fn two_photons_split_binomially_with_hom_pairing() {
        let mut amps = vec![Complex64::new(0.0, 0.0); 16];
        amps[8] = Complex64::new(1.0, 0.0); // |2,0⟩ at cutoffs [3,3]
        let s = FockState::from_amplitudes(&[3, 3], amps, 1e-8).unwrap();
        let out = apply_beam_splitter(&s, 0, 1, 0.5).unwrap();
        assert!(close(out.amplitude(&[2, 0]).norm_sqr(), 0.25, 1e-12));
        assert!(close(out.amplitude(&[0, 2]).norm_sqr(), 0.25, 1e-12));
        assert!(close(out.amplitude(&[1, 1]).norm_sqr(), 0.5, 1e-12));
    }

    #[test]
    fn beam_splitter_conserves_total_photon_number_exactly() {
        let s = FockState::product_coherent(
            &[Complex64::new(0.9, 0.1), Complex64::new(-0.3, 0.6)],
            &[11, 11],
            1e-8,
        )
        .unwrap();
        let sector_mass = |st: &FockState| {
            let joint = st.joint_marginal(0, 1);
            let d = st.dim(1);
            let mut by_total = vec![0.0; 2 * st.cutoff(0) + 2];
            for n1 in 0..st.dim(0) {
                for n2 in 0..d {
                    by_total[n1 + n2] += joint[n1 * d + n2];
                }
            }
            by_total
        };
        let before = sector_mass(&s);
        let after = sector_mass(&apply_beam_splitter(&s, 0, 1, 0.37).unwrap());
        for (b, a) in before.iter().zip(after.iter()) {
            assert!(close(*b, *a, 1e-13));
        }
    }

    #[test]
    fn full_loss_removes_every_photon() {
        let s = FockState::product_coherent(&[Complex64::new(1.2, 0.0)], &[14], 1e-8).unwrap();
        let out = apply_loss(&s, 0, 0.0, 14).unwrap();
        let marg = out.marginal(0);
        assert!(close(marg[0], s.norm_sqr(), 1e-12));
        assert!(close(out.marginal_mean(0), 0.0, 1e-12));
    }

    #[test]
    fn lossless_loss_is_identity_on_the_mode() {
        let s = FockState::product_coherent(&[Complex64::new(0.8, 0.3)], &[12], 1e-8).unwrap();
        let out = apply_loss(&s, 0, 1.0, 12).unwrap();
        let before = s.marginal(0);
        let after = out.marginal(0);
        for (b, a) in before.iter().zip(after.iter()) {
            assert!(close(*b, *a, 1e-13));
        }
    }

    #[test]
    fn partial_loss_thins_a_coherent_state() {
        // A coherent state under loss η stays coherent with mean η·n.
        let n = 1.6;
        let eta = 0.55;
        let s = FockState::product_coherent(&[Complex64::new(math::sqrt(n), 0.0)], &[16], 1e-8)
            .unwrap();
        let out = apply_loss(&s, 0, eta, 16).unwrap();
        assert!(close(out.marginal_mean(0), eta * n, 1e-9));
        let marg = out.marginal(0);
        let mut pmf = math::exp(-eta * n);
        for (k, p) in marg.iter().take(10).enumerate() {
            assert!(close(*p, pmf, 1e-9), "P({k})");
            pmf *= eta * n / (k + 1) as f64;
        }
    }

    #[test]
    fn phase_shift_only_rotates_phases() {
        let s = FockState::product_coherent(&[Complex64::new(1.0, 0.0)], &[10], 1e-8).unwrap();
        let out = apply_phase(&s, 0, 0.7).unwrap();
        for (k, (a, b)) in s.amps().iter().zip(out.amps().iter()).enumerate() {
            assert!(close(a.norm_sqr(), b.norm_sqr(), 1e-15));
            let expect = a * Complex64::new(math::cos(k as f64 * 0.7), math::sin(k as f64 * 0.7));
            assert!(close((expect - b).norm_sqr(), 0.0, 1e-24));
        }
    }

    #[test]
    fn beam_splitter_means_match_heisenberg_map() {
        // Coherent amplitudes mix as (√t·β₁ + i√(1−t)·β₂, i√(1−t)·β₁ + √t·β₂).
        let b1 = Complex64::new(0.8, -0.1);
        let b2 = Complex64::new(0.2, 0.5);
        let t_sq = 0.3;
        let s = FockState::product_coherent(&[b1, b2], &[12, 12], 1e-8).unwrap();
        let out = apply_beam_splitter(&s, 0, 1, t_sq).unwrap();
        let t = math::sqrt(t_sq);
        let rr = Complex64::new(0.0, math::sqrt(1.0 - t_sq));
        let expect_1 = b1 * t + rr * b2;
        let expect_2 = rr * b1 + b2 * t;
        assert!(close(out.marginal_mean(0), expect_1.norm_sqr(), 1e-9));
        assert!(close(out.marginal_mean(1), expect_2.norm_sqr(), 1e-9));
    }

    #[test]
    fn squeezer_hits_budget_on_undersized_basis() {
        // Large gain against a tiny cutoff leaves mass on the boundary.
        let err = apply_two_mode_squeezer(&vacuum2(2), 0, 1, 1.2, 0.0);
        assert!(matches!(err, Err(FockError::TruncationBudgetExceeded { .. })));
    }
}
