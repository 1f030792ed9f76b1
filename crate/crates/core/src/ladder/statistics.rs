use super::distribution::EnergyDistribution;

/// Energy distribution in energy units: `weights[i]` sits at `energies[i]`.
///
/// Built from a pure state, a density matrix diagonal, or an integer-indexed
/// [`EnergyDistribution`] (index read as energy).
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyStatistics {
    energies: Vec<f64>,
    weights: Vec<f64>,
}

impl EnergyStatistics {
    /// Weights are renormalized; entries with zero weight are kept.
    pub fn new(energies: Vec<f64>, weights: Vec<f64>) -> Self {
        assert_eq!(energies.len(), weights.len(), "energies and weights differ in length");
        let total: f64 = weights.iter().sum();
        let weights = if total > 0.0 { weights.iter().map(|w| w / total).collect() } else { weights };
        Self { energies, weights }
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(energy, weight)` pairs with positive weight.
    pub fn support(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.energies.iter().zip(&self.weights).filter(|(_, &w)| w > 0.0).map(|(&e, &w)| (e, w))
    }

    pub fn mean(&self) -> f64 {
        self.support().map(|(e, w)| e * w).sum()
    }

    /// Central moment of order `k`.
    pub fn central_moment(&self, k: i32) -> f64 {
        let m = self.mean();
        self.support().map(|(e, w)| w * (e - m).powi(k)).sum()
    }

    pub fn variance(&self) -> f64 {
        self.central_moment(2)
    }

    pub fn min_support_energy(&self) -> f64 {
        self.support().map(|(e, _)| e).fold(f64::INFINITY, f64::min)
    }

    pub fn max_support_energy(&self) -> f64 {
        self.support().map(|(e, _)| e).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_weight(&self) -> f64 {
        self.support().map(|(_, w)| w).fold(f64::INFINITY, f64::min)
    }

    /// Statistics of the sum of independent energies.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut energies = Vec::with_capacity(self.energies.len() * other.energies.len());
        let mut weights = Vec::with_capacity(energies.capacity());
        for (&a, &p) in self.energies.iter().zip(&self.weights) {
            for (&b, &q) in other.energies.iter().zip(&other.weights) {
                energies.push(a + b);
                weights.push(p * q);
            }
        }
        Self { energies, weights }
    }
}

impl From<&EnergyDistribution> for EnergyStatistics {
    fn from(d: &EnergyDistribution) -> Self {
        let energies = (0..d.len()).map(|k| (d.offset() + k as i64) as f64).collect();
        Self { energies, weights: d.weights().to_vec() }
    }
}

/// Same for a distribution scaled by an energy quantum.
pub fn scaled_statistics(d: &EnergyDistribution, quantum: f64) -> EnergyStatistics {
    let energies = (0..d.len()).map(|k| quantum * (d.offset() + k as i64) as f64).collect();
    EnergyStatistics { energies, weights: d.weights().to_vec() }
}
