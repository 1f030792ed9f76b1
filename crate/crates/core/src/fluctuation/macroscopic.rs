use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ladder::{convolution_power, EnergyDistribution, EnergyStatistics, LadderState};
use crate::potential::lambda;

/// Accepted range of `deviation(4n) / deviation(n)`; the leading error
/// term scales like `n^{-1/2}`, so the ideal ratio is one half.
pub const QUADRUPLING_RATIO: (f64, f64) = (1.0 / 3.0, 0.75);

/// Deviations below this count as exact zero for the decay test.
pub const DEVIATION_FLOOR: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IidRow {
    pub n: usize,
    pub beta: f64,
    /// `Λ(ψ^{⊗n}) − Λ(φ^{⊗n})`.
    pub delta_lambda: f64,
    /// `n (βΔμ − ½β²Δσ²)`.
    pub gaussian: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IidReport {
    pub rows: Vec<IidRow>,
    /// Every quadrupling of `n` in the list shrank the deviation by a ratio
    /// inside [`QUADRUPLING_RATIO`] (or both deviations vanish).
    pub decay_ok: bool,
}

/// n-copy effective potentials at `β = β₀ / (√n λ)` against their Gaussian
/// approximation. Copies are combined by convolving energy distributions.
pub fn iid_limit_check(
    psi: &LadderState,
    phi: &LadderState,
    n_list: &[usize],
    beta0: f64,
    lambda_scale: f64,
) -> Result<IidReport> {
    if n_list.contains(&0) {
        return Err(Error::Config("copy numbers must be positive".into()));
    }
    let (p, q) = (psi.energy_distribution(), phi.energy_distribution());
    let (sp, sq) = (EnergyStatistics::from(&p), EnergyStatistics::from(&q));
    let d_mu = sp.mean() - sq.mean();
    let d_var = sp.variance() - sq.variance();
    let rows: Vec<IidRow> = n_list
        .iter()
        .map(|&n| {
            let beta = beta0 / ((n as f64).sqrt() * lambda_scale);
            let pn = EnergyStatistics::from(&convolution_power(&p, n));
            let qn = EnergyStatistics::from(&convolution_power(&q, n));
            let delta_lambda = lambda(beta, &pn) - lambda(beta, &qn);
            let gaussian = n as f64 * (beta * d_mu - 0.5 * beta * beta * d_var);
            IidRow { n, beta, delta_lambda, gaussian, deviation: (delta_lambda - gaussian).abs() }
        })
        .collect();
    let decay_ok = rows.windows(2).filter(|w| w[1].n == 4 * w[0].n).all(|w| {
        if w[0].deviation <= DEVIATION_FLOOR && w[1].deviation <= DEVIATION_FLOOR {
            return true;
        }
        let ratio = w[1].deviation / w[0].deviation;
        (QUADRUPLING_RATIO.0..=QUADRUPLING_RATIO.1).contains(&ratio)
    });
    Ok(IidReport { rows, decay_ok })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultipartiteReport {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    /// `4 Var(J_z)` of the input.
    pub four_variance: f64,
    /// `s k² + (n − s k)²`.
    pub variance_bound: f64,
    /// Exponent of the bound on the Crooks ratio without the `O(1/√n)`
    /// remainder: `β(W_B − ΔF) + (βε)² bound / 8`.
    pub exponent_bound: f64,
    /// Only the variance inequality; the remainder is never evaluated.
    pub holds: bool,
    pub remainder: String,
}

/// `dist` weights the number of up spins `m ∈ [0, n]`; the energy is
/// `ε (m − n/2)`. The caller certifies `k`-producibility.
pub fn multipartite_bound_check(
    dist: &EnergyDistribution,
    n: usize,
    k: usize,
    epsilon: f64,
    beta: f64,
    w_b: f64,
    delta_f: f64,
) -> Result<MultipartiteReport> {
    if k == 0 || k > n {
        return Err(Error::Config(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let (lo, hi) = dist.support_bounds();
    if lo < 0 || hi > n as i64 {
        return Err(Error::InvalidDistribution(format!("support [{lo}, {hi}] outside [0, {n}]")));
    }
    let s = n / k;
    let four_variance = 4.0 * EnergyStatistics::from(dist).variance();
    let variance_bound = (s * k * k + (n - s * k).pow(2)) as f64;
    if four_variance > variance_bound * (1.0 + 1e-12) {
        return Err(Error::VarianceExceedsBound { four_var: four_variance, bound: variance_bound });
    }
    let be = beta * epsilon;
    Ok(MultipartiteReport {
        n,
        k,
        s,
        four_variance,
        variance_bound,
        exponent_bound: beta * (w_b - delta_f) + be * be * variance_bound / 8.0,
        holds: true,
        remainder: "O(1/sqrt(n))".into(),
    })
}
