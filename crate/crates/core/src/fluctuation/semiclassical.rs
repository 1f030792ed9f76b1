use serde::{Deserialize, Serialize};

use super::bath::BathModel;
use crate::error::Result;
use crate::ladder::{coherent_amplitudes, EnergySpectrum, LadderState};
use crate::linalg::C64;
use crate::potential::lambda;

/// Thermal energy `⟨H⟩_γ = (hν/2) coth(βhν/2)` of an oscillator.
pub fn thermal_energy(h_nu: f64, beta: f64) -> f64 {
    let x = beta * h_nu;
    0.5 * h_nu * (1.0 + (-x).exp()) / -(-x).exp_m1()
}

/// Smallest Fock truncation whose Poisson tail stays below the coherent-state tail bound.
pub fn coherent_truncation(alpha: C64) -> usize {
    let mut n = 8usize;
    while coherent_amplitudes(alpha, n, None).is_err() {
        n += 8;
    }
    n
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemiclassicalReport {
    pub beta: f64,
    pub h_nu: f64,
    pub truncation: usize,
    /// `hν_th`.
    pub thermal_energy: f64,
    /// `⟨H⟩_{α₁} − ⟨H⟩_{α₀}`.
    pub w_s: f64,
    /// Same for the rescaled coherent states `|α e^{−βhν/2}⟩`.
    pub w_s_tilde: f64,
    /// `−½ (W_S + W̃_S)`.
    pub w_b_bar: f64,
    pub beta_delta_f: f64,
    /// `−βΔF − ΔΛ` from the truncated states.
    pub exact_exponent: f64,
    /// `−βΔF + W̄_B / hν_th`.
    pub semiclassical_exponent: f64,
    pub gap: f64,
}

impl SemiclassicalReport {
    /// Thermal de Broglie wavelength for a particle of mass `mass`, from
    /// `hν_th = h²/(m λ²) + hν/2`.
    pub fn de_broglie_wavelength(&self, mass: f64, planck: f64) -> f64 {
        planck / (mass * (self.thermal_energy - 0.5 * self.h_nu)).sqrt()
    }
}

/// Coherent-state transitions `|α₀⟩ → |α₁⟩` of `H = hν (a†a + ½)` against
/// the bath's free-energy change.
pub fn semiclassical_relation(
    alpha0: C64,
    alpha1: C64,
    beta: f64,
    h_nu: f64,
    bath: &BathModel,
) -> Result<SemiclassicalReport> {
    let truncation = coherent_truncation(alpha0).max(coherent_truncation(alpha1));
    let spectrum = EnergySpectrum::oscillator(h_nu, truncation);
    let state = |a: C64| -> Result<LadderState> {
        LadderState::new(spectrum.clone(), coherent_amplitudes(a, truncation, None)?)
    };
    let (s0, s1) = (state(alpha0)?.energy_statistics(), state(alpha1)?.energy_statistics());
    let damp = (-0.5 * beta * h_nu).exp();
    let (t0, t1) = (state(alpha0 * damp)?.energy_statistics(), state(alpha1 * damp)?.energy_statistics());

    let thermal = thermal_energy(h_nu, beta);
    let w_s = s1.mean() - s0.mean();
    let w_s_tilde = t1.mean() - t0.mean();
    let w_b_bar = -0.5 * (w_s + w_s_tilde);
    let beta_delta_f = bath.thermals(beta).beta_delta_f;
    let exact_exponent = -beta_delta_f - (lambda(beta, &s1) - lambda(beta, &s0));
    let semiclassical_exponent = -beta_delta_f + w_b_bar / thermal;
    Ok(SemiclassicalReport {
        beta,
        h_nu,
        truncation,
        thermal_energy: thermal,
        w_s,
        w_s_tilde,
        w_b_bar,
        beta_delta_f,
        exact_exponent,
        semiclassical_exponent,
        gap: (exact_exponent - semiclassical_exponent).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bath() -> BathModel {
        BathModel::new(EnergySpectrum::ladder(0, 3), EnergySpectrum::ladder(1, 2))
    }

    #[test]
    fn exponents_agree() {
        for beta in [0.05, 0.5, 2.0, 8.0] {
            let r = semiclassical_relation(C64::new(1.2, 0.4), C64::new(-0.3, 0.8), beta, 0.7, &bath()).unwrap();
            assert!(r.gap < 1e-9, "{r:?}");
        }
    }

    #[test]
    fn thermal_energy_limits() {
        assert!((thermal_energy(1.0, 60.0) - 0.5).abs() < 1e-12);
        let beta = 1e-3;
        let kt = 1.0 / beta;
        assert!((thermal_energy(1.0, beta) - kt).abs() <= beta * 1.0);
    }

    #[test]
    fn equal_amplitudes_give_free_energy_only() {
        let a = C64::new(0.9, -0.2);
        let r = semiclassical_relation(a, a, 1.0, 1.0, &bath()).unwrap();
        assert_eq!(r.w_b_bar, 0.0);
        assert!((r.semiclassical_exponent + r.beta_delta_f).abs() < 1e-15);
    }
}
