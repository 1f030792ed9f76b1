use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Energies closer than this (in spectral units) belong to one eigenspace.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Discrete spectrum on a finite integer window `[offset, offset + len)`.
///
/// Level `n` of the window has energy `levels[n - offset]`. Energies are in
/// quanta of the base energy unless stated otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergySpectrum {
    offset: i64,
    levels: Vec<f64>,
    tolerance: f64,
}

impl EnergySpectrum {
    pub fn new(offset: i64, levels: Vec<f64>, tolerance: f64) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidSpectrum("no levels".into()));
        }
        if levels.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidSpectrum("non-finite energy".into()));
        }
        if levels.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidSpectrum("levels not sorted ascending".into()));
        }
        if !(tolerance > 0.0) {
            return Err(Error::InvalidSpectrum(format!("grouping tolerance {tolerance} <= 0")));
        }
        Ok(Self { offset, levels, tolerance })
    }

    /// Unit-spaced ladder: level `n` has energy `n`.
    pub fn ladder(offset: i64, len: usize) -> Self {
        Self::scaled_ladder(offset, len, 1.0)
    }

    /// Level `n` has energy `spacing · n`.
    pub fn scaled_ladder(offset: i64, len: usize, spacing: f64) -> Self {
        let levels = (0..len as i64).map(|k| spacing * (offset + k) as f64).collect();
        Self { offset, levels, tolerance: DEGENERACY_TOL }
    }

    /// Truncated oscillator `hν (n + ½)` for `n = 0..len`.
    pub fn oscillator(h_nu: f64, len: usize) -> Self {
        let levels = (0..len).map(|n| h_nu * (n as f64 + 0.5)).collect();
        Self { offset: 0, levels, tolerance: DEGENERACY_TOL }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Inclusive index window.
    pub fn window(&self) -> (i64, i64) {
        (self.offset, self.offset + self.levels.len() as i64 - 1)
    }

    pub fn contains(&self, index: i64) -> bool {
        let (lo, hi) = self.window();
        (lo..=hi).contains(&index)
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Energy of level `index`; panics outside the window.
    pub fn energy(&self, index: i64) -> f64 {
        self.levels[(index - self.offset) as usize]
    }

    pub fn min_energy(&self) -> f64 {
        self.levels[0]
    }

    pub fn max_energy(&self) -> f64 {
        self.levels[self.levels.len() - 1]
    }

    /// Eigenspaces as `(energy, positions)`; positions are 0-based into the
    /// window. Consecutive levels within the tolerance share a group.
    pub fn eigenspaces(&self) -> Vec<(f64, Vec<usize>)> {
        let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
        for (i, &e) in self.levels.iter().enumerate() {
            match groups.last_mut() {
                Some((_, members)) if e - self.levels[*members.last().unwrap()] <= self.tolerance => {
                    members.push(i)
                }
                _ => groups.push((e, vec![i])),
            }
        }
        groups
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_energies_follow_index() {
        let s = EnergySpectrum::ladder(-2, 5);
        assert_eq!(s.window(), (-2, 2));
        assert_eq!(s.energy(-2), -2.0);
        assert_eq!(s.energy(2), 2.0);
    }

    #[test]
    fn rejects_unsorted_and_bad_tolerance() {
        assert!(EnergySpectrum::new(0, vec![1.0, 0.0], 1e-9).is_err());
        assert!(EnergySpectrum::new(0, vec![0.0, 1.0], 0.0).is_err());
        assert!(EnergySpectrum::new(0, vec![f64::NAN], 1e-9).is_err());
    }

    #[test]
    fn groups_degenerate_levels() {
        let s = EnergySpectrum::new(0, vec![0.0, 1.0, 1.0 + 5e-10, 2.0], DEGENERACY_TOL).unwrap();
        let g = s.eigenspaces();
        assert_eq!(g.len(), 3);
        assert_eq!(g[1].1, vec![1, 2]);
    }
}
