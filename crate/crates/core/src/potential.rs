//! The effective potential `Λ(β, ρ) = −log tr(e^{−βH} ρ)`, its cumulant
//! expansion, Gibbs rescaling and the mean coherence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ladder::{DensityMatrix, EnergySpectrum, EnergyStatistics, LadderState};
use crate::linalg::{CMatrix, C64};

/// Gibbs normalizers below this underflow.
pub const UNDERFLOW_GUARD: f64 = 1e-300;

/// Highest cumulant order computed.
pub const MAX_CUMULANT_ORDER: usize = 8;

const ROOT_GRID: usize = 512;
const BISECTION_STEPS: usize = 200;

/// `log Σ_k p_k e^{−β E_k}`, computed without overflow.
///
/// Small `β·spread` uses a mean-shifted `expm1`/`ln_1p` form so the result
/// keeps relative precision as `β → 0`; otherwise the minimum support energy
/// is factored out.
pub fn log_partition_overlap(beta: f64, stats: &EnergyStatistics) -> f64 {
    if beta == 0.0 {
        return 0.0;
    }
    let mean = stats.mean();
    let spread = stats.support().map(|(e, _)| (e - mean).abs()).fold(0.0, f64::max);
    if beta.abs() * spread <= 1.0 {
        let s: f64 = stats.support().map(|(e, w)| w * (-beta * (e - mean)).exp_m1()).sum();
        -beta * mean + s.ln_1p()
    } else {
        let shift = if beta > 0.0 { stats.min_support_energy() } else { stats.max_support_energy() };
        let s: f64 = stats.support().map(|(e, w)| w * (-beta * (e - shift)).exp()).sum();
        -beta * shift + s.ln()
    }
}

/// `Λ(β, ρ)`.
pub fn lambda(beta: f64, stats: &EnergyStatistics) -> f64 {
    -log_partition_overlap(beta, stats)
}

/// `log Σ_k e^{−β E_k}` over all listed energies.
pub fn log_partition(beta: f64, energies: &[f64]) -> f64 {
    if energies.is_empty() {
        return f64::NEG_INFINITY;
    }
    let shift = if beta >= 0.0 {
        energies.iter().copied().fold(f64::INFINITY, f64::min)
    } else {
        energies.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    };
    -beta * shift + energies.iter().map(|e| (-beta * (e - shift)).exp()).sum::<f64>().ln()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectivePotentialReport {
    pub beta: f64,
    pub value: f64,
    pub log_partition_overlap: f64,
    /// `κ_1 .. κ_n`.
    pub cumulants: Vec<f64>,
}

/// `Λ(β, ρ)` together with the first `n_cumulants` cumulants of the energy.
pub fn effective_potential(beta: f64, stats: &EnergyStatistics, n_cumulants: usize) -> Result<EffectivePotentialReport> {
    let log_overlap = log_partition_overlap(beta, stats);
    Ok(EffectivePotentialReport {
        beta,
        value: -log_overlap,
        log_partition_overlap: log_overlap,
        cumulants: cumulants(stats, n_cumulants)?,
    })
}

/// Pure-state convenience: `Λ` of the energy distribution of `state`.
pub fn state_potential(beta: f64, state: &LadderState) -> f64 {
    lambda(beta, &state.energy_statistics())
}

/// `κ_1 .. κ_{n_max}` from central moments via the moment-cumulant recursion.
pub fn cumulants(stats: &EnergyStatistics, n_max: usize) -> Result<Vec<f64>> {
    if n_max > MAX_CUMULANT_ORDER {
        return Err(Error::InvalidOrder(n_max));
    }
    if n_max == 0 {
        return Ok(Vec::new());
    }
    let mean = stats.mean();
    // m[k] = E[(X − mean)^k]
    let m: Vec<f64> = (0..=n_max).map(|k| stats.central_moment(k as i32)).collect();
    let mut kappa = vec![0.0; n_max + 1];
    for n in 1..=n_max {
        let mut acc = m[n];
        for j in 1..n {
            acc -= binomial(n - 1, j - 1) * kappa[j] * m[n - j];
        }
        kappa[n] = acc;
    }
    kappa[1] = mean;
    Ok(kappa[1..].to_vec())
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `Σ_{n≤N} (−1)^{n+1} βⁿ κ_n / n!`.
pub fn cumulant_series(beta: f64, kappas: &[f64]) -> f64 {
    let mut term = 1.0;
    let mut total = 0.0;
    for (i, k) in kappas.iter().enumerate() {
        let n = i + 1;
        term *= beta / n as f64;
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * term * k;
    }
    total
}

/// `Γ(X)` and the log of its normalizer `tr(e^{−βH} X)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GibbsRescaled<T> {
    pub state: T,
    pub beta: f64,
    pub log_normalizer: f64,
}

fn guard(log_normalizer: f64) -> Result<()> {
    if !(log_normalizer >= UNDERFLOW_GUARD.ln()) {
        return Err(Error::Underflow { log_normalizer });
    }
    Ok(())
}

/// Weights `p̃_k ∝ e^{−βE_k} p_k`.
pub fn gibbs_rescale_weights(stats: &EnergyStatistics, beta: f64) -> Result<GibbsRescaled<EnergyStatistics>> {
    let log_n = log_partition_overlap(beta, stats);
    guard(log_n)?;
    let weights = stats
        .energies()
        .iter()
        .zip(stats.weights())
        .map(|(&e, &w)| if w > 0.0 { (w.ln() - beta * e - log_n).exp() } else { 0.0 })
        .collect();
    Ok(GibbsRescaled {
        state: EnergyStatistics::new(stats.energies().to_vec(), weights),
        beta,
        log_normalizer: log_n,
    })
}

/// `Γ(|ψ⟩⟨ψ|)` for a pure state: amplitudes scale by `e^{−βE_k/2}`.
pub fn gibbs_rescale(state: &LadderState, beta: f64) -> Result<GibbsRescaled<LadderState>> {
    let stats = state.energy_statistics();
    let log_n = log_partition_overlap(beta, &stats);
    guard(log_n)?;
    let amps = state
        .amplitudes()
        .iter()
        .zip(state.spectrum().levels())
        .map(|(a, &e)| a * (-0.5 * (beta * e + log_n)).exp())
        .collect();
    Ok(GibbsRescaled {
        state: LadderState::normalized(state.spectrum().clone(), amps)?,
        beta,
        log_normalizer: log_n,
    })
}

/// `Γ(X)` for a positive operator `X` in the energy basis (`energies[i]` on
/// basis vector `i`), e.g. a projector onto a Hamiltonian block.
pub fn gibbs_rescale_operator(energies: &[f64], x: &CMatrix, beta: f64) -> Result<GibbsRescaled<CMatrix>> {
    let n = energies.len();
    if x.nrows() != n || x.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.nrows() });
    }
    let diag: Vec<f64> = (0..n).map(|i| x[(i, i)].re).collect();
    let support: Vec<usize> = (0..n).filter(|&i| diag[i] > 0.0).collect();
    if support.is_empty() {
        return Err(Error::Underflow { log_normalizer: f64::NEG_INFINITY });
    }
    let shift = support.iter().map(|&i| energies[i]).fold(f64::INFINITY, f64::min);
    let scaled: f64 = support.iter().map(|&i| diag[i] * (-beta * (energies[i] - shift)).exp()).sum();
    let log_n = -beta * shift + scaled.ln();
    guard(log_n)?;
    // A positive operator vanishes on rows with zero diagonal; skip them so
    // low energies outside the support cannot overflow.
    let half: Vec<f64> = (0..n)
        .map(|i| if diag[i] > 0.0 { (-0.5 * beta * (energies[i] - shift)).exp() } else { 0.0 })
        .collect();
    let state = CMatrix::from_fn(n, n, |i, j| x[(i, j)] * (half[i] * half[j] / scaled));
    Ok(GibbsRescaled { state, beta, log_normalizer: log_n })
}

/// `Γ(ρ)` for a density matrix.
pub fn gibbs_rescale_density(rho: &DensityMatrix, beta: f64) -> Result<GibbsRescaled<DensityMatrix>> {
    let g = gibbs_rescale_operator(rho.energies(), rho.matrix(), beta)?;
    Ok(GibbsRescaled {
        state: DensityMatrix::new(rho.energies().to_vec(), g.state)?,
        beta,
        log_normalizer: g.log_normalizer,
    })
}

/// `|γ⟩ = Σ_k √(e^{−βE_k}/Z) |k⟩` on the whole spectrum.
pub fn coherent_gibbs_state(spectrum: &EnergySpectrum, beta: f64) -> Result<LadderState> {
    let log_z = log_partition(beta, spectrum.levels());
    let amps = spectrum.levels().iter().map(|&e| C64::new((-0.5 * (beta * e + log_z)).exp(), 0.0)).collect();
    LadderState::normalized(spectrum.clone(), amps)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanCoherenceReport {
    pub beta: f64,
    pub chi_m: f64,
    /// Smallest root, reported as primary.
    pub beta_m: f64,
    /// Every root found on `[0, β]`.
    pub beta_m_roots: Vec<f64>,
    /// `β(⟨H⟩_p − ⟨H⟩_p̃)`.
    pub energy_term: f64,
    /// `S(p̃ ‖ p)`.
    pub divergence_term: f64,
    /// `|(β²/8π) χ_m − (energy_term − divergence_term)|`.
    pub identity_residual: f64,
}

/// Mean coherence `χ_m` with `(β²/8π) χ_m = β⟨H⟩ − Λ` and the inverse
/// temperature `β_m ∈ [0, β]` where `4π κ₂(p̃ at β_m) = χ_m`.
pub fn mean_coherence(stats: &EnergyStatistics, beta: f64) -> Result<MeanCoherenceReport> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::RootNotFound(format!("mean coherence needs beta > 0, got {beta}")));
    }
    let lam = lambda(beta, stats);
    let mean = stats.mean();
    let excess = (beta * mean - lam).max(0.0);
    let chi_m = 8.0 * std::f64::consts::PI * excess / (beta * beta);

    let tilde = gibbs_rescale_weights(stats, beta)?.state;
    let energy_term = beta * (mean - tilde.mean());
    let divergence_term: f64 = tilde
        .weights()
        .iter()
        .zip(stats.weights())
        .filter(|(&t, _)| t > 0.0)
        .map(|(&t, &p)| t * (t / p).ln())
        .sum();
    let identity_residual = (excess - (energy_term - divergence_term)).abs();

    let target = 2.0 * excess / (beta * beta);
    let roots = mvt_roots(stats, beta, target)?;
    Ok(MeanCoherenceReport {
        beta,
        chi_m,
        beta_m: roots[0],
        beta_m_roots: roots,
        energy_term,
        divergence_term,
        identity_residual,
    })
}

/// Variance of the Gibbs-rescaled weights at inverse temperature `b`.
pub fn rescaled_variance(stats: &EnergyStatistics, b: f64) -> f64 {
    gibbs_rescale_weights(stats, b).map(|g| g.state.variance()).unwrap_or(0.0)
}

fn mvt_roots(stats: &EnergyStatistics, beta: f64, target: f64) -> Result<Vec<f64>> {
    let g = |b: f64| rescaled_variance(stats, b) - target;
    // A sharp state has κ₂ ≡ 0 = target: every b solves, report 0.
    if stats.variance() <= 1e-300 && target.abs() <= 1e-300 {
        return Ok(vec![0.0]);
    }
    let grid: Vec<f64> = (0..=ROOT_GRID).map(|i| beta * i as f64 / ROOT_GRID as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&b| g(b)).collect();
    let mut roots = Vec::new();
    for i in 0..ROOT_GRID {
        let (a, b) = (grid[i], grid[i + 1]);
        let (fa, fb) = (vals[i], vals[i + 1]);
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..BISECTION_STEPS {
                let mid = 0.5 * (lo + hi);
                let fm = g(mid);
                if fm == 0.0 || hi - lo <= 1e-15 * beta.max(1.0) {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
    }
    if vals[ROOT_GRID] == 0.0 {
        roots.push(beta);
    }
    if roots.is_empty() {
        let closest = vals.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
        return Err(Error::RootNotFound(format!(
            "no sign change of kappa2 - {target:e} on [0, {beta}], closest |gap| {closest:e}"
        )));
    }
    Ok(roots)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariationalReport {
    pub beta: f64,
    /// `min_σ β⟨H⟩_σ + S(σ ‖ D(ρ))`.
    pub value: f64,
    pub argmin: Vec<f64>,
    /// Spread `max − min` of `βE_k + log(σ_k/p_k)`; zero exactly at a
    /// stationary point of the simplex-constrained problem.
    pub stationarity: f64,
    pub iterations: usize,
    /// Direct log-sum-exp value of `Λ` for comparison.
    pub lambda_direct: f64,
}

/// Minimize `β⟨H⟩_σ + S(σ‖p)` by entropic mirror descent started at `Γ(p)`.
pub fn variational_potential(beta: f64, stats: &EnergyStatistics) -> Result<VariationalReport> {
    let start = gibbs_rescale_weights(stats, beta)?.state;
    variational_potential_from(beta, stats, start.weights())
}

/// As [`variational_potential`] from an arbitrary full-support start.
pub fn variational_potential_from(beta: f64, stats: &EnergyStatistics, start: &[f64]) -> Result<VariationalReport> {
    let p = stats.weights();
    if p.iter().any(|&w| !(w > 0.0)) || start.len() != p.len() || start.iter().any(|&w| !(w > 0.0)) {
        return Err(Error::NotFullRank);
    }
    let e = stats.energies();
    let log_p: Vec<f64> = p.iter().map(|w| w.ln()).collect();
    let mut log_s: Vec<f64> = start.iter().map(|w| w.ln()).collect();
    normalize_log(&mut log_s);
    let spread = |log_s: &[f64]| {
        let g: Vec<f64> = (0..p.len()).map(|k| beta * e[k] + log_s[k] - log_p[k]).collect();
        g.iter().copied().fold(f64::NEG_INFINITY, f64::max) - g.iter().copied().fold(f64::INFINITY, f64::min)
    };
    let eta = 0.5;
    let mut iterations = 0;
    while spread(&log_s) > 1e-12 && iterations < 10_000 {
        for k in 0..p.len() {
            log_s[k] = (1.0 - eta) * log_s[k] + eta * (log_p[k] - beta * e[k]);
        }
        normalize_log(&mut log_s);
        iterations += 1;
    }
    let sigma: Vec<f64> = log_s.iter().map(|l| l.exp()).collect();
    let value = (0..p.len()).map(|k| sigma[k] * (beta * e[k] + log_s[k] - log_p[k])).sum();
    Ok(VariationalReport {
        beta,
        value,
        stationarity: spread(&log_s),
        argmin: sigma,
        iterations,
        lambda_direct: lambda(beta, stats),
    })
}

fn normalize_log(l: &mut [f64]) {
    let m = l.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let z = m + l.iter().map(|x| (x - m).exp()).sum::<f64>().ln();
    l.iter_mut().for_each(|x| *x -= z);
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub grid_len: usize,
    pub concave: bool,
    pub monotone_on_grid: bool,
    /// Every listed energy of `H` is nonnegative.
    pub h_nonnegative: bool,
    /// Eigenstate at the lowest negative energy, if any, whose `Λ` decreases.
    pub monotonicity_witness: Option<f64>,
    pub hoeffding_ok: bool,
    pub range_ok: bool,
    pub high_t_ok: bool,
    pub low_t_ok: bool,
    pub violations: Vec<String>,
}

impl PropertyReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Concavity, monotonicity, Hoeffding and range bounds, and both temperature
/// limits of `Λ(·, ρ)` on a grid of at least 16 values.
pub fn check_potential_properties(stats: &EnergyStatistics, beta_grid: &[f64]) -> Result<PropertyReport> {
    if beta_grid.len() < 16 {
        return Err(Error::Config(format!("beta grid needs at least 16 values, got {}", beta_grid.len())));
    }
    let mut grid = beta_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let vals: Vec<f64> = grid.iter().map(|&b| lambda(b, stats)).collect();
    let mut violations = Vec::new();

    let mut concave = true;
    for i in 1..grid.len() - 1 {
        let (a, b, c) = (grid[i - 1], grid[i], grid[i + 1]);
        if c - a <= 0.0 {
            continue;
        }
        let chord = vals[i - 1] + (vals[i + 1] - vals[i - 1]) * (b - a) / (c - a);
        if chord - vals[i] > 1e-8 {
            concave = false;
            violations.push(format!("concavity at beta = {b}: chord exceeds by {:e}", chord - vals[i]));
        }
    }

    let monotone_on_grid = vals.windows(2).all(|w| w[1] >= w[0] - 1e-12);
    let e_min_h = stats.energies().iter().copied().fold(f64::INFINITY, f64::min);
    let e_max_h = stats.energies().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let h_nonnegative = e_min_h >= 0.0;
    let mut monotonicity_witness = None;
    if h_nonnegative && grid[0] >= 0.0 && !monotone_on_grid {
        violations.push("H >= 0 but Lambda decreases on the grid".into());
    }
    if !h_nonnegative {
        // The eigenstate at E < 0 has Λ = βE, strictly decreasing in β.
        let sharp = EnergyStatistics::new(vec![e_min_h], vec![1.0]);
        let (b0, b1) = (grid[0], grid[grid.len() - 1]);
        if lambda(b1, &sharp) < lambda(b0, &sharp) {
            monotonicity_witness = Some(e_min_h);
        } else {
            violations.push("negative eigenvalue but eigenstate potential not decreasing".into());
        }
    }

    let mean = stats.mean();
    let kappa2 = stats.variance();
    let smin = stats.min_support_energy();
    let mut hoeffding_ok = true;
    let mut range_ok = true;
    let mut high_t_ok = true;
    let mut low_t_ok = true;
    for (&b, &v) in grid.iter().zip(&vals) {
        if b < 0.0 {
            continue;
        }
        let slack = 1e-10 * (1.0 + v.abs());
        let lower = b * mean - b * b / 8.0 * (e_max_h - e_min_h).powi(2);
        if v > b * mean + slack || v < lower - slack {
            hoeffding_ok = false;
            violations.push(format!("Hoeffding bound at beta = {b}"));
        }
        if v < b * e_min_h - slack || v > b * e_max_h + slack {
            range_ok = false;
            violations.push(format!("range bound at beta = {b}"));
        }
        let s = 1e-4;
        let dev = (lambda(s * b, stats) / s - b * mean).abs();
        if dev > 1e-3 * b * b * kappa2 + 1e-9 {
            high_t_ok = false;
            violations.push(format!("high-temperature limit at beta = {b}: deviation {dev:e}"));
        }
        if b > 0.0 {
            let p_min: f64 = stats.support().filter(|(e, _)| (e - smin).abs() <= 1e-9).map(|(_, w)| w).sum();
            let mut prev = f64::INFINITY;
            for s in [10.0, 100.0, 1000.0] {
                let gap = lambda(s * b, stats) / s - b * smin;
                let bound = -p_min.ln() / s;
                if gap < -1e-10 || gap > bound + 1e-10 || gap > prev + 1e-12 {
                    low_t_ok = false;
                    violations.push(format!("low-temperature limit at beta = {b}, s = {s}: gap {gap:e}"));
                }
                prev = gap;
            }
        }
    }
    Ok(PropertyReport {
        grid_len: grid.len(),
        concave,
        monotone_on_grid,
        h_nonnegative,
        monotonicity_witness,
        hoeffding_ok,
        range_ok,
        high_t_ok,
        low_t_ok,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ladder::{oscillator_coherent_state, EnergyDistribution};
    use crate::linalg::{outer, sup_norm, CVector};

    fn stats(e: &[f64], w: &[f64]) -> EnergyStatistics {
        EnergyStatistics::new(e.to_vec(), w.to_vec())
    }

    #[test]
    fn sharp_state_potential() {
        let s = stats(&[3.0], &[1.0]);
        assert!((lambda(2.5, &s) - 7.5).abs() < 1e-14);
        assert_eq!(lambda(0.0, &s), 0.0);
    }

    #[test]
    fn bernoulli_cumulants() {
        let s = EnergyStatistics::from(&EnergyDistribution::uniform(&[0, 1]).unwrap());
        let k = cumulants(&s, 4).unwrap();
        assert!((k[0] - 0.5).abs() < 1e-15 && (k[1] - 0.25).abs() < 1e-15);
        assert!(k[2].abs() < 1e-15);
        assert!((k[3] + 0.125).abs() < 1e-15);
        assert!(matches!(cumulants(&s, 9), Err(Error::InvalidOrder(9))));
    }

    #[test]
    fn oscillator_closed_form() {
        let (h_nu, beta, a2) = (1.0_f64, 0.8_f64, 1.69_f64);
        let st = oscillator_coherent_state(C64::new(1.3, 0.0), h_nu, 60).unwrap();
        let want = beta * h_nu / 2.0 + a2 * (1.0 - (-beta * h_nu).exp());
        assert!((state_potential(beta, &st) - want).abs() < 1e-10);
    }

    #[test]
    fn rescaled_eigenstate_unchanged() {
        let s = LadderState::eigenstate(4);
        let g = gibbs_rescale(&s, 3.0).unwrap();
        assert!(g.state.fidelity(&s) > 1.0 - 1e-15);
    }

    #[test]
    fn uniform_superposition_becomes_coherent_gibbs() {
        let spec = EnergySpectrum::ladder(0, 5);
        let u = LadderState::from_distribution(&EnergyDistribution::uniform(&[0, 1, 2, 3, 4]).unwrap(), None).unwrap();
        let g = gibbs_rescale(&u, 0.7).unwrap().state;
        assert!(g.fidelity(&coherent_gibbs_state(&spec, 0.7).unwrap()) > 1.0 - 1e-14);
    }

    #[test]
    fn maximally_entangled_rescales_to_thermofield_double() {
        let e = [0.0, 0.4, 1.3];
        let d = e.len();
        let phi = CVector::from_fn(d * d, |i, _| if i / d == i % d { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
            .unscale((d as f64).sqrt());
        // H_A ⊗ 1 on the composite basis.
        let energies: Vec<f64> = (0..d * d).map(|i| e[i / d]).collect();
        let g = gibbs_rescale_operator(&energies, &outer(&phi, &phi), 2.0).unwrap().state;
        let z: f64 = e.iter().map(|x| (-2.0 * x).exp()).sum();
        let tfd = CVector::from_fn(d * d, |i, _| {
            if i / d == i % d { C64::new((-e[i / d]).exp() / z.sqrt(), 0.0) } else { C64::new(0.0, 0.0) }
        });
        assert!(sup_norm(&(g - outer(&tfd, &tfd))) < 1e-14);
    }

    #[test]
    fn rescaling_is_a_semigroup() {
        let s = stats(&[0.0, 1.0, 2.5, 4.0], &[0.1, 0.4, 0.3, 0.2]);
        let two = gibbs_rescale_weights(&gibbs_rescale_weights(&s, 0.3).unwrap().state, 1.1).unwrap().state;
        let one = gibbs_rescale_weights(&s, 1.4).unwrap().state;
        for (a, b) in two.weights().iter().zip(one.weights()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn underflow_reported() {
        let s = stats(&[1000.0], &[1.0]);
        assert!(matches!(gibbs_rescale_weights(&s, 1.0), Err(Error::Underflow { .. })));
    }

    #[test]
    fn eigenstate_has_no_mean_coherence() {
        let r = mean_coherence(&stats(&[2.0], &[1.0]), 1.5).unwrap();
        assert!(r.chi_m.abs() < 1e-14);
        assert_eq!(r.beta_m, 0.0);
    }

    #[test]
    fn mean_coherence_identity_and_range() {
        let s = stats(&[0.0, 1.0, 3.0], &[0.5, 0.2, 0.3]);
        let r = mean_coherence(&s, 2.0).unwrap();
        assert!(r.identity_residual < 1e-12);
        assert!(r.beta_m >= 0.0 && r.beta_m <= 2.0);
        let kappa = rescaled_variance(&s, r.beta_m);
        assert!((4.0 * std::f64::consts::PI * kappa - r.chi_m).abs() < 1e-9);
    }

    #[test]
    fn variational_matches_direct() {
        let s = stats(&[0.0, 1.0, 2.0, 5.0], &[0.1, 0.2, 0.3, 0.4]);
        let r = variational_potential_from(1.0, &s, &[0.25; 4]).unwrap();
        assert!(r.stationarity <= 1e-10);
        assert!((r.value - r.lambda_direct).abs() < 1e-8);
        assert!(matches!(variational_potential(1.0, &stats(&[0.0, 1.0], &[1.0, 0.0])), Err(Error::NotFullRank)));
    }

    #[test]
    fn property_suite_on_simple_state() {
        let s = stats(&[-1.0, 0.0, 2.0], &[0.2, 0.5, 0.3]);
        let grid: Vec<f64> = (0..20).map(|i| 0.25 * i as f64).collect();
        let r = check_potential_properties(&s, &grid).unwrap();
        assert!(r.holds(), "{:?}", r.violations);
        assert!(!r.h_nonnegative && r.monotonicity_witness == Some(-1.0));
    }
}
