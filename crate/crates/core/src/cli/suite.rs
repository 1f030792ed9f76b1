//! Worked cases reproduced by `cohwork examples`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cwp::{apply_cwp, build_cwp_unitary, infer_work_distribution};
use crate::decomposition::{deconvolve, DeconvolveOptions};
use crate::error::{Error, Result};
use crate::fluctuation::{coherent_work_ft_check, FtSign};
use crate::ladder::{EnergyDistribution, EnergySpectrum, LadderState};
use crate::linalg::{kron_vec, CVector, C64};
use crate::potential::{coherent_gibbs_state, log_partition, mean_coherence};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CaseResult {
    fn from(name: &str, r: Result<(bool, String)>) -> Self {
        let (passed, detail) = r.unwrap_or_else(|e| (false, format!("error: {e}")));
        Self { name: name.into(), passed, detail }
    }

    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

fn uniform(ix: &[i64]) -> EnergyDistribution {
    EnergyDistribution::uniform(ix).expect("nonempty support")
}

/// `|0⟩, |1⟩ → |5⟩, |6⟩` with work state `|−5⟩`, on random superpositions.
pub fn shift_by_five(trials: usize, seed: u64) -> Result<(bool, String)> {
    let v = build_cwp_unitary(&uniform(&[0, 1]), &uniform(&[5, 6]), &EnergyDistribution::point(-5), None, None)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 1.0_f64;
    for _ in 0..trials {
        let mut z = || C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let (a, b) = (z(), z());
        let input = LadderState::normalized(EnergySpectrum::ladder(0, 2), vec![a, b])?;
        let (a, b) = (input.amplitude(0), input.amplitude(1));
        let out = v.apply(&v.embed_input(&input)?);
        let sys = CVector::from_fn(v.dim_system(), |i, _| {
            match v.system_window.0 + i as i64 {
                5 => a,
                6 => b,
                _ => C64::new(0.0, 0.0),
            }
        });
        let aux = CVector::from_fn(v.dim_aux(), |j, _| {
            if v.aux_window.0 + j as i64 == -5 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
        });
        worst = worst.min(crate::linalg::fidelity(&out, &kron_vec(&sys, &aux)));
    }
    Ok((worst >= 1.0 - 1e-12, format!("min fidelity over {trials} superpositions {worst:.15}")))
}

/// Uniform on `{0..3}` splits as `{5,6} ⊛ {−5,−3}` and the process is irreversible.
pub fn four_level_split() -> Result<(bool, String)> {
    let p = uniform(&[0, 1, 2, 3]);
    let found = deconvolve(&p, &DeconvolveOptions::default())?;
    let (q, r) = (uniform(&[5, 6]), uniform(&[-5, -3]));
    let has_split = found
        .factors
        .iter()
        .any(|f| f.q.shifted(5).sup_distance(&q) < 1e-8 && f.r.shifted(-5).sup_distance(&r) < 1e-8);
    let v = build_cwp_unitary(&p, &q, &r, None, None)?;
    let rec = apply_cwp(&v, &LadderState::from_distribution(&p, None)?)?;
    let work_gap = rec.work_state.energy_distribution().trimmed().sup_distance(&r);
    let passed = has_split && rec.product_fidelity >= 1.0 - 1e-12 && work_gap < 1e-12 && !rec.reversible;
    Ok((
        passed,
        format!(
            "split found {has_split}, product fidelity {:.15}, work gap {work_gap:.1e}, reversible {}",
            rec.product_fidelity, rec.reversible
        ),
    ))
}

/// No process takes the uniform superposition of `{0,1}` to that of `{5,7}`.
pub fn impossible_spread() -> Result<(bool, String)> {
    let a = LadderState::from_distribution(&uniform(&[0, 1]), None)?;
    let b = LadderState::from_distribution(&uniform(&[5, 7]), None)?;
    Ok(match infer_work_distribution(&a, &b) {
        Err(Error::NoValidProcess { residual }) => (true, format!("no valid process (residual {residual:.3e})")),
        Err(e) => (false, format!("unexpected error: {e}")),
        Ok(r) => (false, format!("unexpected work distribution {r:?}")),
    })
}

/// Mean coherence of a uniform superposition equals a free-energy gap.
pub fn uniform_superposition_coherence(levels: &[f64], beta: f64) -> Result<(bool, String)> {
    let d = levels.len();
    let spectrum = EnergySpectrum::new(0, levels.to_vec(), 1e-9)?;
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    let psi = LadderState::new(spectrum.clone(), vec![amp; d])?;
    let rep = mean_coherence(&psi.energy_statistics(), beta)?;
    let mean = levels.iter().sum::<f64>() / d as f64;
    let beta_f_uniform = beta * mean - (d as f64).ln();
    let beta_f_gibbs = -log_partition(beta, levels);
    let lhs = beta * beta / (8.0 * std::f64::consts::PI) * rep.chi_m;
    let gap = (lhs - (beta_f_uniform - beta_f_gibbs)).abs();
    // The rescaled state is the coherent Gibbs state.
    let gibbs = coherent_gibbs_state(&spectrum, beta)?;
    let tilde = crate::potential::gibbs_rescale(&psi, beta)?.state;
    let fid = tilde.fidelity(&gibbs);
    Ok((gap <= 1e-10 && fid >= 1.0 - 1e-12, format!("free-energy gap {gap:.1e}, rescaled fidelity {fid:.15}")))
}

/// Deconvolve, build, run and check effective-potential additivity.
pub fn pipeline() -> Result<(bool, String)> {
    let p = uniform(&[0, 1, 2, 3]);
    let found = deconvolve(&p, &DeconvolveOptions::default())?;
    let pair = found.factors.first().ok_or(Error::NoValidProcess { residual: found.residual })?;
    let (q, r) = (pair.q.shifted(5).trimmed(), pair.r.shifted(-5).trimmed());
    let v = build_cwp_unitary(&p, &q, &r, None, None)?;
    v.validate()?;
    let input = LadderState::from_distribution(&p, None)?;
    let rec = apply_cwp(&v, &input)?;
    let grid: Vec<f64> = (0..=40).map(|i| 0.25 * i as f64).collect();
    let ft = coherent_work_ft_check(&input, &rec.output, &rec.work_state, &grid)?;
    let passed = ft.sign == FtSign::Minus && ft.process_verified && rec.product_fidelity >= 1.0 - 1e-12;
    Ok((
        passed,
        format!(
            "{} factor pairs, product fidelity {:.15}, potential additivity deviation {:.1e}",
            found.factors.len(),
            rec.product_fidelity,
            ft.max_deviation
        ),
    ))
}

/// Every case, in a fixed order.
pub fn run_suite(seed: u64) -> Vec<CaseResult> {
    vec![
        CaseResult::from("shift-by-five", shift_by_five(20, seed)),
        CaseResult::from("four-level-split", four_level_split()),
        CaseResult::from("impossible-spread", impossible_spread()),
        CaseResult::from("uniform-superposition-coherence", uniform_superposition_coherence(&[0.0, 1.0, 2.0, 3.5], 0.9)),
        CaseResult::from("decompose-build-run", pipeline()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_cases_pass() {
        for case in run_suite(1) {
            assert!(case.passed, "{}", case.line());
        }
    }
}
