use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ladder::{DensityMatrix, EnergySpectrum};
use crate::linalg::{CMatrix, CVector, C64};
use crate::potential::log_partition;

/// Bath Hamiltonian `H_B = H_0 ⊕ H_1 ⊕ H_other`.
///
/// Basis order is the H0 levels, then H1, then the inert block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BathModel {
    pub h0: EnergySpectrum,
    pub h1: EnergySpectrum,
    /// Never populated by any protocol here; empty by default.
    pub other: Option<EnergySpectrum>,
}

/// Thermal data of a [`BathModel`] at one inverse temperature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BathThermals {
    pub beta: f64,
    /// Gibbs weights on the H0 and H1 blocks.
    pub gibbs0: Vec<f64>,
    pub gibbs1: Vec<f64>,
    /// `βF_k = −log tr e^{−βH_k}`.
    pub beta_f0: f64,
    pub beta_f1: f64,
    /// `β(F_1 − F_0)`.
    pub beta_delta_f: f64,
}

impl BathThermals {
    /// `ΔF`; needs `β > 0`.
    pub fn delta_f(&self) -> f64 {
        self.beta_delta_f / self.beta
    }
}

impl BathModel {
    pub fn new(h0: EnergySpectrum, h1: EnergySpectrum) -> Self {
        Self { h0, h1, other: None }
    }

    pub fn with_other(mut self, other: EnergySpectrum) -> Self {
        self.other = Some(other);
        self
    }

    pub fn dim0(&self) -> usize {
        self.h0.len()
    }

    pub fn dim1(&self) -> usize {
        self.h1.len()
    }

    pub fn dim(&self) -> usize {
        self.dim0() + self.dim1() + self.other.as_ref().map_or(0, EnergySpectrum::len)
    }

    /// Energies of `H_B` in basis order.
    pub fn energies(&self) -> Vec<f64> {
        let mut e = self.h0.levels().to_vec();
        e.extend_from_slice(self.h1.levels());
        if let Some(o) = &self.other {
            e.extend_from_slice(o.levels());
        }
        e
    }

    fn block_range(&self, block: usize) -> Result<std::ops::Range<usize>> {
        match block {
            0 => Ok(0..self.dim0()),
            1 => Ok(self.dim0()..self.dim0() + self.dim1()),
            _ => Err(Error::InvalidProjector(format!("bath has no block {block}"))),
        }
    }

    /// Projector `Π_k` onto block `k ∈ {0, 1}`.
    pub fn projector(&self, block: usize) -> Result<CMatrix> {
        let range = self.block_range(block)?;
        let d = CVector::from_fn(self.dim(), |i, _| if range.contains(&i) { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
        Ok(CMatrix::from_diagonal(&d))
    }

    pub fn thermals(&self, beta: f64) -> BathThermals {
        let gibbs = |s: &EnergySpectrum| {
            let log_z = log_partition(beta, s.levels());
            let w: Vec<f64> = s.levels().iter().map(|e| (-beta * e - log_z).exp()).collect();
            (w, -log_z)
        };
        let (gibbs0, beta_f0) = gibbs(&self.h0);
        let (gibbs1, beta_f1) = gibbs(&self.h1);
        BathThermals { beta, gibbs0, gibbs1, beta_f0, beta_f1, beta_delta_f: beta_f1 - beta_f0 }
    }

    /// `γ_k` embedded in the full bath space.
    pub fn gibbs_state(&self, block: usize, beta: f64) -> Result<DensityMatrix> {
        let range = self.block_range(block)?;
        let th = self.thermals(beta);
        let w = if block == 0 { th.gibbs0 } else { th.gibbs1 };
        let mut full = vec![0.0; self.dim()];
        for (k, i) in range.enumerate() {
            full[i] = w[k];
        }
        DensityMatrix::diagonal(self.energies(), &full)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_energies_match_partition_sums() {
        let bath = BathModel::new(
            EnergySpectrum::new(0, vec![0.0, 1.0, 1.0], 1e-9).unwrap(),
            EnergySpectrum::new(0, vec![0.5, 2.0], 1e-9).unwrap(),
        );
        let beta = 0.7;
        let th = bath.thermals(beta);
        let z0 = 1.0 + 2.0 * (-beta).exp();
        let z1 = (-0.5 * beta).exp() + (-2.0 * beta).exp();
        assert!((th.beta_f0 + z0.ln()).abs() < 1e-12);
        assert!((th.beta_f1 + z1.ln()).abs() < 1e-12);
        assert_eq!(bath.dim(), 5);
        let g = bath.gibbs_state(1, beta).unwrap();
        assert!((g.matrix().trace().re - 1.0).abs() < 1e-14);
    }
}
