//! JSON file formats for states and distributions.
//!
//! A state file is `{"offset": k, "amplitudes": [[re, im], ...]}` and a
//! distribution file is `{"offset": k, "weights": [...]}`. Both live on the
//! unit ladder starting at level `offset`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ladder::{EnergyDistribution, EnergySpectrum, LadderState};
use crate::linalg::C64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub offset: i64,
    pub amplitudes: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionFile {
    pub offset: i64,
    pub weights: Vec<f64>,
}

impl StateFile {
    pub fn from_state(state: &LadderState) -> Self {
        Self { offset: state.offset(), amplitudes: state.amplitudes().iter().map(|z| [z.re, z.im]).collect() }
    }

    /// Validated state; the norm must be one within `1e-12`.
    pub fn to_state(&self) -> Result<LadderState> {
        let amps = self.amplitudes.iter().map(|&[re, im]| C64::new(re, im)).collect();
        LadderState::new(EnergySpectrum::ladder(self.offset, self.amplitudes.len()), amps)
    }
}

impl DistributionFile {
    pub fn from_distribution(d: &EnergyDistribution) -> Self {
        Self { offset: d.offset(), weights: d.weights().to_vec() }
    }

    pub fn to_distribution(&self) -> Result<EnergyDistribution> {
        EnergyDistribution::new(self.offset, self.weights.clone())
    }
}

pub fn read_state(path: impl AsRef<Path>) -> Result<LadderState> {
    let f: StateFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    f.to_state()
}

pub fn write_state(path: impl AsRef<Path>, state: &LadderState) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(&StateFile::from_state(state))? + "\n")?;
    Ok(())
}

pub fn read_distribution(path: impl AsRef<Path>) -> Result<EnergyDistribution> {
    let f: DistributionFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    f.to_distribution()
}

pub fn write_distribution(path: impl AsRef<Path>, d: &EnergyDistribution) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(&DistributionFile::from_distribution(d))? + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let s = LadderState::normalized(EnergySpectrum::ladder(-2, 3), vec![C64::new(0.3, 0.1), C64::new(0.0, 0.0), C64::new(-0.5, 0.8)]).unwrap();
        write_state(dir.path().join("s.json"), &s).unwrap();
        let back = read_state(dir.path().join("s.json")).unwrap();
        assert!((back.fidelity(&s) - 1.0).abs() < 1e-15);

        let d = EnergyDistribution::uniform(&[5, 7]).unwrap();
        write_distribution(dir.path().join("d.json"), &d).unwrap();
        assert_eq!(read_distribution(dir.path().join("d.json")).unwrap(), d);
    }

    #[test]
    fn unnormalized_file_rejected() {
        let f = StateFile { offset: 0, amplitudes: vec![[1.0, 0.0], [1.0, 0.0]] };
        assert!(f.to_state().is_err());
    }
}
