use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weights below this are stored as exact zero.
pub const WEIGHT_FLOOR: f64 = 1e-15;

/// Normalization tolerance for distributions and states.
pub const NORM_TOL: f64 = 1e-12;

/// Nonnegative weights on the integer window `[offset, offset + len)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyDistribution {
    offset: i64,
    weights: Vec<f64>,
}

impl EnergyDistribution {
    /// Validating constructor: weights must be finite, nonnegative and sum to
    /// one within [`NORM_TOL`].
    pub fn new(offset: i64, weights: Vec<f64>) -> Result<Self> {
        let weights = clean(weights)?;
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
        Ok(Self { offset, weights })
    }

    /// Rescales arbitrary nonnegative weights to unit mass.
    pub fn from_unnormalized(offset: i64, weights: Vec<f64>) -> Result<Self> {
        let weights = clean(weights)?;
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidDistribution("zero total mass".into()));
        }
        let weights = clean(weights.into_iter().map(|w| w / total).collect())?;
        Ok(Self { offset, weights })
    }

    pub fn point(index: i64) -> Self {
        Self { offset: index, weights: vec![1.0] }
    }

    /// Uniform weight on the listed indices.
    pub fn uniform(indices: &[i64]) -> Result<Self> {
        let (Some(&lo), Some(&hi)) = (indices.iter().min(), indices.iter().max()) else {
            return Err(Error::InvalidDistribution("empty support".into()));
        };
        let mut weights = vec![0.0; (hi - lo + 1) as usize];
        for &i in indices {
            weights[(i - lo) as usize] += 1.0;
        }
        Self::from_unnormalized(lo, weights)
    }

    /// Poisson(λ) pmf on `shift .. shift + len`, renormalized after truncation.
    pub fn poisson(lambda: f64, shift: i64, len: usize) -> Result<Self> {
        if !(lambda >= 0.0) || len == 0 {
            return Err(Error::InvalidDistribution(format!("poisson({lambda}) on {len} levels")));
        }
        Self::from_unnormalized(shift, poisson_pmf(lambda, len))
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Inclusive index window.
    pub fn window(&self) -> (i64, i64) {
        (self.offset, self.offset + self.weights.len() as i64 - 1)
    }

    pub fn weight(&self, index: i64) -> f64 {
        let k = index - self.offset;
        if k < 0 || k >= self.weights.len() as i64 {
            0.0
        } else {
            self.weights[k as usize]
        }
    }

    /// `(index, weight)` pairs with positive weight.
    pub fn support(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(move |(k, &w)| (self.offset + k as i64, w))
    }

    /// Smallest and largest index carrying weight.
    pub fn support_bounds(&self) -> (i64, i64) {
        let lo = self.support().next().map(|(i, _)| i).unwrap_or(self.offset);
        let hi = self.support().last().map(|(i, _)| i).unwrap_or(self.offset);
        (lo, hi)
    }

    /// Same distribution on the tightest window around its support.
    pub fn trimmed(&self) -> Self {
        let (lo, hi) = self.support_bounds();
        let start = (lo - self.offset) as usize;
        let end = (hi - self.offset) as usize;
        Self { offset: lo, weights: self.weights[start..=end].to_vec() }
    }

    /// Same weights on a window `[lo, hi]` that contains the support.
    pub fn on_window(&self, lo: i64, hi: i64) -> Result<Self> {
        let (s_lo, s_hi) = self.support_bounds();
        if s_lo < lo || s_hi > hi {
            return Err(Error::WindowOverflow { lo, hi, index: if s_lo < lo { s_lo } else { s_hi } });
        }
        let weights = (lo..=hi).map(|n| self.weight(n)).collect();
        Ok(Self { offset: lo, weights })
    }

    pub fn shifted(&self, by: i64) -> Self {
        Self { offset: self.offset + by, weights: self.weights.clone() }
    }

    /// Distribution of `−X`.
    pub fn reflected(&self) -> Self {
        let (_, hi) = self.window();
        Self { offset: -hi, weights: self.weights.iter().rev().copied().collect() }
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.support().map(|(n, w)| n as f64 * w).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.support().map(|(n, w)| w * (n as f64 - m).powi(2)).sum()
    }

    /// Point mass up to the triviality threshold `1 − 1e-9`.
    pub fn is_point_mass(&self) -> bool {
        self.max_weight() >= 1.0 - crate::decomposition::TRIVIALITY_TOL
    }

    /// Total-variation distance `½ Σ |p − q|`.
    pub fn tv_distance(&self, other: &Self) -> f64 {
        0.5 * self.abs_diffs(other).sum::<f64>()
    }

    /// `max |p − q|`.
    pub fn sup_distance(&self, other: &Self) -> f64 {
        self.abs_diffs(other).fold(0.0, f64::max)
    }

    fn abs_diffs<'a>(&'a self, other: &'a Self) -> impl Iterator<Item = f64> + 'a {
        let (a_lo, a_hi) = self.window();
        let (b_lo, b_hi) = other.window();
        (a_lo.min(b_lo)..=a_hi.max(b_hi)).map(move |n| (self.weight(n) - other.weight(n)).abs())
    }
}

fn clean(weights: Vec<f64>) -> Result<Vec<f64>> {
    if weights.is_empty() {
        return Err(Error::InvalidDistribution("empty window".into()));
    }
    weights
        .into_iter()
        .map(|w| {
            if !w.is_finite() || w < -WEIGHT_FLOOR {
                Err(Error::InvalidDistribution(format!("bad weight {w}")))
            } else if w < WEIGHT_FLOOR {
                Ok(0.0)
            } else {
                Ok(w)
            }
        })
        .collect()
}

/// `e^{-λ} λ^n / n!` for `n = 0..len` (not renormalized).
pub fn poisson_pmf(lambda: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut term = (-lambda).exp();
    for n in 0..len {
        if n > 0 {
            term *= lambda / n as f64;
        }
        out.push(term);
    }
    out
}

/// `P[X ≥ len]` for `X ~ Poisson(λ)`, summed directly over the tail.
pub fn poisson_tail(lambda: f64, len: usize) -> f64 {
    if lambda == 0.0 {
        return if len == 0 { 1.0 } else { 0.0 };
    }
    let ln_fact: f64 = (1..=len).map(|k| (k as f64).ln()).sum();
    let mut log_term = -lambda + len as f64 * lambda.ln() - ln_fact;
    let mut n = len;
    let mut sum = 0.0;
    loop {
        let term = log_term.exp();
        sum += term;
        n += 1;
        log_term += lambda.ln() - (n as f64).ln();
        if n as f64 > lambda && (term < 1e-30 || term < sum * 1e-18) {
            break;
        }
        if n > len + 100_000 {
            break;
        }
    }
    sum
}

/// `p_n = Σ_j r_j q_{n−j}`, normalized, on the window `[q_lo + r_lo, q_hi + r_hi]`.
pub fn convolve(q: &EnergyDistribution, r: &EnergyDistribution) -> EnergyDistribution {
    let mut out = vec![0.0; q.len() + r.len() - 1];
    for (i, &a) in q.weights.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        for (j, &b) in r.weights.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    EnergyDistribution::from_unnormalized(q.offset + r.offset, out)
        .expect("convolution of distributions is a distribution")
}

/// n-fold convolution power by repeated squaring.
pub fn convolution_power(p: &EnergyDistribution, n: usize) -> EnergyDistribution {
    assert!(n >= 1, "convolution power needs n >= 1");
    let mut result: Option<EnergyDistribution> = None;
    let mut base = p.clone();
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(acc) => convolve(&acc, &base),
            });
        }
        k >>= 1;
        if k > 0 {
            base = convolve(&base, &base);
        }
    }
    result.expect("n >= 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convolving_with_point_zero_is_identity() {
        let q = EnergyDistribution::new(3, vec![0.2, 0.5, 0.3]).unwrap();
        let p = convolve(&q, &EnergyDistribution::point(0));
        assert_eq!(p.offset(), 3);
        assert!(p.sup_distance(&q) < 1e-15);
    }

    #[test]
    fn example_two_reversed() {
        let q = EnergyDistribution::uniform(&[5, 6]).unwrap();
        let r = EnergyDistribution::uniform(&[-5, -3]).unwrap();
        let p = convolve(&q, &r);
        let want = EnergyDistribution::uniform(&[0, 1, 2, 3]).unwrap();
        assert!(p.sup_distance(&want) < 1e-15);
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(EnergyDistribution::new(0, vec![0.5, 0.6]).is_err());
        assert!(EnergyDistribution::new(0, vec![1.5, -0.5]).is_err());
        assert!(EnergyDistribution::new(0, vec![]).is_err());
    }

    #[test]
    fn tiny_weights_become_zero() {
        let d = EnergyDistribution::from_unnormalized(0, vec![1.0, 1e-17, 1.0]).unwrap();
        assert_eq!(d.weights()[1], 0.0);
    }

    #[test]
    fn poisson_tail_matches_complement() {
        let lambda = 1.7;
        let len = 6;
        let head: f64 = poisson_pmf(lambda, len).iter().sum();
        assert!((poisson_tail(lambda, len) - (1.0 - head)).abs() < 1e-14);
    }

    #[test]
    fn convolution_power_matches_repeated() {
        let p = EnergyDistribution::new(0, vec![0.7, 0.3]).unwrap();
        let mut direct = p.clone();
        for _ in 1..5 {
            direct = convolve(&direct, &p);
        }
        assert!(convolution_power(&p, 5).sup_distance(&direct) < 1e-15);
    }
}
