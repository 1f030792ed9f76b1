use serde::{Deserialize, Serialize};

use super::distribution::EnergyDistribution;
use crate::error::{Error, Result};

/// Slack allowed in partial-sum comparisons.
pub const MAJORIZATION_TOL: f64 = 1e-12;

/// Schur-concave disorder measures on weight vectors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DisorderFunctional {
    Shannon,
    /// Rényi entropy of the given positive order; order 1 is Shannon.
    Renyi(f64),
    /// `−max_n p_n`.
    MaxWeightNegated,
}

pub fn disorder(dist: &EnergyDistribution, functional: DisorderFunctional) -> Result<f64> {
    disorder_of_weights(dist.weights(), functional)
}

pub fn disorder_of_weights(weights: &[f64], functional: DisorderFunctional) -> Result<f64> {
    let positive = weights.iter().copied().filter(|&w| w > 0.0);
    Ok(match functional {
        DisorderFunctional::Shannon => shannon(weights),
        DisorderFunctional::Renyi(a) if !(a > 0.0) || !a.is_finite() => {
            return Err(Error::InvalidRenyiOrder(a))
        }
        DisorderFunctional::Renyi(a) if (a - 1.0).abs() < 1e-12 => shannon(weights),
        DisorderFunctional::Renyi(a) => positive.map(|w| w.powf(a)).sum::<f64>().ln() / (1.0 - a),
        DisorderFunctional::MaxWeightNegated => -weights.iter().copied().fold(0.0, f64::max),
    })
}

fn shannon(weights: &[f64]) -> f64 {
    -weights.iter().filter(|&&w| w > 0.0).map(|&w| w * w.ln()).sum::<f64>()
}

/// True iff `p ≺ q`: every descending partial sum of `q` dominates `p`'s.
pub fn majorizes(q: &EnergyDistribution, p: &EnergyDistribution) -> bool {
    majorizes_weights(q.weights(), p.weights())
}

pub fn majorizes_weights(q: &[f64], p: &[f64]) -> bool {
    let sorted = |w: &[f64]| {
        let mut v: Vec<f64> = w.iter().copied().filter(|&x| x > 0.0).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    };
    let (qs, ps) = (sorted(q), sorted(p));
    let len = qs.len().max(ps.len());
    let (mut sq, mut sp) = (0.0, 0.0);
    for k in 0..len {
        sq += qs.get(k).copied().unwrap_or(0.0);
        sp += ps.get(k).copied().unwrap_or(0.0);
        if sq + MAJORIZATION_TOL < sp {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shannon_of_uniforms() {
        let u4 = EnergyDistribution::uniform(&[0, 1, 2, 3]).unwrap();
        let u2 = EnergyDistribution::uniform(&[5, 6]).unwrap();
        let h4 = disorder(&u4, DisorderFunctional::Shannon).unwrap();
        assert!((h4 - 2.0 * 2f64.ln()).abs() < 1e-15);
        assert!((disorder(&u2, DisorderFunctional::Shannon).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(disorder(&EnergyDistribution::point(3), DisorderFunctional::Shannon).unwrap(), 0.0);
    }

    #[test]
    fn renyi_order_checked() {
        let u = EnergyDistribution::uniform(&[0, 1]).unwrap();
        assert!(disorder(&u, DisorderFunctional::Renyi(0.0)).is_err());
        assert!(disorder(&u, DisorderFunctional::Renyi(-1.0)).is_err());
        let r2 = disorder(&u, DisorderFunctional::Renyi(2.0)).unwrap();
        assert!((r2 - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn majorization_examples() {
        let u4 = EnergyDistribution::uniform(&[0, 1, 2, 3]).unwrap();
        let u2 = EnergyDistribution::uniform(&[5, 6]).unwrap();
        assert!(majorizes(&u2, &u4));
        assert!(!majorizes(&u4, &u2));
        assert!(majorizes(&EnergyDistribution::point(9), &u4));
    }
}
