use serde::{Deserialize, Serialize};

use super::bath::BathModel;
use super::protocol::ProtocolUnitary;
use crate::cwp::{apply_cwp, build_cwp_unitary};
use crate::error::{Error, Result};
use crate::ladder::{EnergyStatistics, LadderState};
use crate::linalg::{hermiticity_residual, kron, outer, sup_norm, CMatrix};
use crate::potential::{cumulants, gibbs_rescale_operator, gibbs_rescale_weights, lambda, mean_coherence};

/// Reverse probabilities below this leave the ratio undefined.
pub const REVERSE_FLOOR: f64 = 1e-14;

/// Tolerance of the coherent-work identity on a β grid.
pub const FT_MATCH_TOL: f64 = 1e-9;

fn check_projector(p: &CMatrix, name: &str) -> Result<()> {
    let herm = hermiticity_residual(p);
    let idem = sup_norm(&(p * p - p));
    if herm > 1e-10 || idem > 1e-10 {
        return Err(Error::InvalidProjector(format!("{name}: hermiticity {herm:e}, idempotency {idem:e}")));
    }
    Ok(())
}

/// `tr[Π₁ V Γ(Π₀) V†]`.
pub fn trajectory_probability(
    final_proj: &CMatrix,
    initial_proj: &CMatrix,
    v: &ProtocolUnitary,
    beta: f64,
) -> Result<f64> {
    check_projector(final_proj, "final projector")?;
    check_projector(initial_proj, "initial projector")?;
    let g = gibbs_rescale_operator(v.energies(), initial_proj, beta).map_err(|e| match e {
        Error::Underflow { .. } => Error::DegenerateConstraint,
        other => other,
    })?;
    let evolved = v.matrix() * g.state * v.matrix().adjoint();
    Ok((final_proj * evolved).trace().re)
}

/// `|ψ⟩⟨ψ| ⊗ Π_k` on the composite space.
pub fn constraint_projector(psi: &LadderState, bath: &BathModel, block: usize) -> Result<CMatrix> {
    let v = psi.to_vector();
    Ok(kron(&outer(&v, &v), &bath.projector(block)?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrooksReport {
    pub beta: f64,
    pub p_forward: f64,
    pub p_reverse: f64,
    /// `p_forward / p_reverse`, absent when the reverse probability is below
    /// the floor.
    pub lhs_ratio: Option<f64>,
    /// `−βΔF − ΔΛ`.
    pub rhs_exponent: f64,
    pub beta_delta_f: f64,
    pub delta_lambda: f64,
    /// `|lhs_ratio / e^{rhs_exponent} − 1|`.
    pub agreement: Option<f64>,
    pub warning: Option<String>,
}

/// Forward and reverse trajectory probabilities; never fails on a small
/// reverse probability (see [`crooks_check`]).
pub fn crooks_evaluate(
    psi0: &LadderState,
    psi1: &LadderState,
    bath: &BathModel,
    v: &ProtocolUnitary,
    beta: f64,
) -> Result<CrooksReport> {
    if psi0.spectrum() != psi1.spectrum() {
        return Err(Error::InvalidState("initial and final states live on different spectra".into()));
    }
    let dim = psi0.dim() * bath.dim();
    if v.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: v.dim() });
    }
    let pi0 = constraint_projector(psi0, bath, 0)?;
    let pi1 = constraint_projector(psi1, bath, 1)?;
    let p_forward = trajectory_probability(&pi1, &pi0, v, beta)?;
    let p_reverse = trajectory_probability(&pi0.map(|z| z.conj()), &pi1.map(|z| z.conj()), v, beta)?;
    let th = bath.thermals(beta);
    let delta_lambda = lambda(beta, &psi1.energy_statistics()) - lambda(beta, &psi0.energy_statistics());
    let rhs_exponent = -th.beta_delta_f - delta_lambda;
    let (lhs_ratio, agreement, warning) = if p_reverse >= REVERSE_FLOOR {
        let ratio = p_forward / p_reverse;
        (Some(ratio), Some((ratio / rhs_exponent.exp() - 1.0).abs()), None)
    } else {
        (None, None, Some(format!("reverse probability {p_reverse:e} below floor {REVERSE_FLOOR:e}")))
    };
    Ok(CrooksReport {
        beta,
        p_forward,
        p_reverse,
        lhs_ratio,
        rhs_exponent,
        beta_delta_f: th.beta_delta_f,
        delta_lambda,
        agreement,
        warning,
    })
}

/// [`crooks_evaluate`], failing with `ReverseZero` when the ratio is undefined.
pub fn crooks_check(
    psi0: &LadderState,
    psi1: &LadderState,
    bath: &BathModel,
    v: &ProtocolUnitary,
    beta: f64,
) -> Result<CrooksReport> {
    let r = crooks_evaluate(psi0, psi1, bath, v, beta)?;
    if r.lhs_ratio.is_none() {
        return Err(Error::ReverseZero { forward: r.p_forward, reverse: r.p_reverse });
    }
    Ok(r)
}

/// The exponent of the coherent Crooks ratio written four ways.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentForms {
    pub beta: f64,
    /// `−βΔF − ΔΛ`.
    pub effective_potential: f64,
    /// `−βΔF + Σ_{n≤8} (−1)ⁿ βⁿ Δκ_n / n!`.
    pub cumulant: f64,
    /// `−βΔF − βW_S + (β²/8π) Δχ`.
    pub mean_coherence: f64,
    /// `−βΔF − βW̃_S + S(p̃₀‖p₀) − S(p̃₁‖p₁)`.
    pub relative_entropy: f64,
}

impl ExponentForms {
    /// Largest pairwise difference. The cumulant form is included only when
    /// `include_cumulant` is set (it is a truncated series).
    pub fn max_pairwise_gap(&self, include_cumulant: bool) -> f64 {
        let mut v = vec![self.effective_potential, self.mean_coherence, self.relative_entropy];
        if include_cumulant {
            v.push(self.cumulant);
        }
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        hi - lo
    }
}

pub fn exponent_forms(
    p0: &EnergyStatistics,
    p1: &EnergyStatistics,
    beta_delta_f: f64,
    beta: f64,
) -> Result<ExponentForms> {
    let effective_potential = -beta_delta_f - (lambda(beta, p1) - lambda(beta, p0));

    let k0 = cumulants(p0, 8)?;
    let k1 = cumulants(p1, 8)?;
    let mut series = 0.0;
    let mut term = 1.0;
    for n in 1..=8 {
        term *= beta / n as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        series += sign * term * (k1[n - 1] - k0[n - 1]);
    }
    let cumulant = -beta_delta_f + series;

    let m0 = mean_coherence(p0, beta)?;
    let m1 = mean_coherence(p1, beta)?;
    let w_s = p1.mean() - p0.mean();
    let mean_coherence_form =
        -beta_delta_f - beta * w_s + beta * beta / (8.0 * std::f64::consts::PI) * (m1.chi_m - m0.chi_m);

    let t0 = gibbs_rescale_weights(p0, beta)?.state;
    let t1 = gibbs_rescale_weights(p1, beta)?.state;
    let w_s_tilde = t1.mean() - t0.mean();
    let relative_entropy = -beta_delta_f - beta * w_s_tilde + m0.divergence_term - m1.divergence_term;

    Ok(ExponentForms { beta, effective_potential, cumulant, mean_coherence: mean_coherence_form, relative_entropy })
}

/// Which way the effective potentials add up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FtSign {
    /// `Λ(ψ₀) = Λ(ψ₁) + Λ(ω)`: `ψ₀` is the input and `ω` the work output.
    Minus,
    /// `Λ(ψ₁) = Λ(ψ₀) + Λ(ω)`: the process runs from `ψ₁` to `ψ₀`.
    Plus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherentWorkFtReport {
    pub sign: FtSign,
    /// Largest deviation of the matched identity over the grid.
    pub max_deviation: f64,
    /// A coherent work process on the three distributions was built and
    /// produced a product output.
    pub process_verified: bool,
}

/// Match `Λ(β, ψ₀) = Λ(β, ψ₁) ± Λ(β, ω)` on every grid point.
pub fn coherent_work_ft_check(
    psi0: &LadderState,
    psi1: &LadderState,
    omega: &LadderState,
    beta_grid: &[f64],
) -> Result<CoherentWorkFtReport> {
    let (s0, s1, sw) = (psi0.energy_statistics(), psi1.energy_statistics(), omega.energy_statistics());
    let (mut dev_minus, mut dev_plus) = (0.0_f64, 0.0_f64);
    for &b in beta_grid {
        let (l0, l1, lw) = (lambda(b, &s0), lambda(b, &s1), lambda(b, &sw));
        dev_minus = dev_minus.max((l0 - l1 - lw).abs());
        dev_plus = dev_plus.max((l1 - l0 - lw).abs());
    }
    let (sign, max_deviation, input, output) = if dev_minus <= FT_MATCH_TOL {
        (FtSign::Minus, dev_minus, psi0, psi1)
    } else if dev_plus <= FT_MATCH_TOL {
        (FtSign::Plus, dev_plus, psi1, psi0)
    } else {
        return Err(Error::NoMatch { deviation: dev_minus.min(dev_plus) });
    };
    let p = input.energy_distribution();
    let q = output.energy_distribution();
    let r = omega.energy_distribution();
    let process_verified = build_cwp_unitary(&p, &q, &r, None, None)
        .and_then(|v| apply_cwp(&v, &LadderState::from_distribution(&p, None)?))
        .map(|rec| rec.work_state.energy_distribution().trimmed().sup_distance(&r.trimmed()) <= 1e-9)
        .unwrap_or(false);
    Ok(CoherentWorkFtReport { sign, max_deviation, process_verified })
}
