use serde::{Deserialize, Serialize};

use super::distribution::{poisson_tail, EnergyDistribution, NORM_TOL};
use super::spectrum::EnergySpectrum;
use super::statistics::EnergyStatistics;
use crate::error::{Error, Result};
use crate::linalg::{hermiticity_residual, hermitian_eigenvalues, outer, CMatrix, CVector, C64, ZERO};

/// Largest Poisson tail mass a truncated coherent state may discard.
pub const TAIL_BOUND: f64 = 1e-12;

/// Pure state on the window of an [`EnergySpectrum`].
///
/// `amplitudes[k]` belongs to level `spectrum.offset() + k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderState {
    spectrum: EnergySpectrum,
    amplitudes: Vec<C64>,
    /// `1 − Σ|a|²` before renormalization.
    deficit: f64,
}

impl LadderState {
    /// Amplitudes must already be normalized within `1e-12`.
    pub fn new(spectrum: EnergySpectrum, amplitudes: Vec<C64>) -> Result<Self> {
        check_len(&spectrum, amplitudes.len())?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm² = {norm}")));
        }
        Ok(Self { spectrum, amplitudes, deficit: 1.0 - norm })
    }

    /// Rescales to unit norm and keeps the pre-normalization deficit.
    pub fn normalized(spectrum: EnergySpectrum, amplitudes: Vec<C64>) -> Result<Self> {
        check_len(&spectrum, amplitudes.len())?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState(format!("cannot normalize, norm² = {norm}")));
        }
        let s = norm.sqrt();
        let amplitudes = amplitudes.into_iter().map(|a| a / s).collect();
        Ok(Self { spectrum, amplitudes, deficit: 1.0 - norm })
    }

    /// `Σ e^{iθ_n} √p_n |n⟩` on a unit ladder spanning the distribution window.
    pub fn from_distribution(dist: &EnergyDistribution, phases: Option<&[f64]>) -> Result<Self> {
        let spectrum = EnergySpectrum::ladder(dist.offset(), dist.len());
        Self::from_distribution_on(spectrum, dist, phases)
    }

    /// As [`from_distribution`](Self::from_distribution) on a given spectrum.
    /// `phases` is indexed like the distribution's weights.
    pub fn from_distribution_on(
        spectrum: EnergySpectrum,
        dist: &EnergyDistribution,
        phases: Option<&[f64]>,
    ) -> Result<Self> {
        if let Some(ph) = phases {
            if ph.len() != dist.len() {
                return Err(Error::DimensionMismatch { expected: dist.len(), got: ph.len() });
            }
        }
        let (lo, hi) = spectrum.window();
        let (s_lo, s_hi) = dist.support_bounds();
        if s_lo < lo || s_hi > hi {
            return Err(Error::WindowOverflow { lo, hi, index: if s_lo < lo { s_lo } else { s_hi } });
        }
        let amplitudes = (lo..=hi)
            .map(|n| {
                let w = dist.weight(n);
                let theta = phases
                    .map(|ph| {
                        let k = n - dist.offset();
                        if k >= 0 && (k as usize) < ph.len() { ph[k as usize] } else { 0.0 }
                    })
                    .unwrap_or(0.0);
                C64::from_polar(w.sqrt(), theta)
            })
            .collect();
        Self::normalized(spectrum, amplitudes)
    }

    /// `|index⟩` on a single-level unit ladder.
    pub fn eigenstate(index: i64) -> Self {
        Self {
            spectrum: EnergySpectrum::ladder(index, 1),
            amplitudes: vec![C64::new(1.0, 0.0)],
            deficit: 0.0,
        }
    }

    /// `|index⟩` on the given spectrum.
    pub fn eigenstate_on(spectrum: EnergySpectrum, index: i64) -> Result<Self> {
        if !spectrum.contains(index) {
            let (lo, hi) = spectrum.window();
            return Err(Error::WindowOverflow { lo, hi, index });
        }
        let mut amplitudes = vec![ZERO; spectrum.len()];
        amplitudes[(index - spectrum.offset()) as usize] = C64::new(1.0, 0.0);
        Ok(Self { spectrum, amplitudes, deficit: 0.0 })
    }

    pub fn spectrum(&self) -> &EnergySpectrum {
        &self.spectrum
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn offset(&self) -> i64 {
        self.spectrum.offset()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn deficit(&self) -> f64 {
        self.deficit
    }

    pub fn amplitude(&self, index: i64) -> C64 {
        let k = index - self.offset();
        if k < 0 || k >= self.amplitudes.len() as i64 {
            ZERO
        } else {
            self.amplitudes[k as usize]
        }
    }

    /// Weight at level `n` is `|amplitude_n|²`.
    pub fn energy_distribution(&self) -> EnergyDistribution {
        let weights = self.amplitudes.iter().map(|a| a.norm_sqr()).collect();
        EnergyDistribution::from_unnormalized(self.offset(), weights)
            .expect("normalized state has positive mass")
    }

    /// Energies and weights per level.
    pub fn energy_statistics(&self) -> EnergyStatistics {
        EnergyStatistics::new(
            self.spectrum.levels().to_vec(),
            self.amplitudes.iter().map(|a| a.norm_sqr()).collect(),
        )
    }

    /// Free evolution `e^{−iHt}`.
    pub fn evolve(&self, t: f64) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .zip(self.spectrum.levels())
            .map(|(a, &e)| a * C64::from_polar(1.0, -e * t))
            .collect();
        Self { amplitudes, ..self.clone() }
    }

    /// Multiply amplitude `k` of the window by `e^{iθ_k}`.
    pub fn with_phases(&self, phases: &[f64]) -> Result<Self> {
        if phases.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: phases.len() });
        }
        let amplitudes = self
            .amplitudes
            .iter()
            .zip(phases)
            .map(|(a, &t)| a * C64::from_polar(1.0, t))
            .collect();
        Ok(Self { amplitudes, ..self.clone() })
    }

    /// Same amplitudes on another spectrum of equal window.
    pub fn with_spectrum(&self, spectrum: EnergySpectrum) -> Result<Self> {
        if spectrum.window() != self.spectrum.window() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: spectrum.len() });
        }
        Ok(Self { spectrum, ..self.clone() })
    }

    /// Re-express on a wider unit ladder `[lo, hi]` (zero padding).
    pub fn on_ladder_window(&self, lo: i64, hi: i64) -> Result<Self> {
        let (s_lo, s_hi) = self.support_bounds();
        if s_lo < lo || s_hi > hi {
            return Err(Error::WindowOverflow { lo, hi, index: if s_lo < lo { s_lo } else { s_hi } });
        }
        let spectrum = EnergySpectrum::ladder(lo, (hi - lo + 1) as usize);
        let amplitudes = (lo..=hi).map(|n| self.amplitude(n)).collect();
        Ok(Self { spectrum, amplitudes, deficit: self.deficit })
    }

    /// Smallest and largest level with nonzero amplitude.
    pub fn support_bounds(&self) -> (i64, i64) {
        self.energy_distribution().support_bounds()
    }

    pub fn to_vector(&self) -> CVector {
        CVector::from_vec(self.amplitudes.clone())
    }

    /// `|⟨self|other⟩|²` over the union of the windows.
    pub fn fidelity(&self, other: &Self) -> f64 {
        let (a_lo, a_hi) = self.spectrum.window();
        let (b_lo, b_hi) = other.spectrum.window();
        let overlap: C64 = (a_lo.max(b_lo)..=a_hi.min(b_hi))
            .map(|n| self.amplitude(n).conj() * other.amplitude(n))
            .sum();
        overlap.norm_sqr()
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        let v = self.to_vector();
        DensityMatrix { energies: self.spectrum.levels().to_vec(), matrix: outer(&v, &v) }
    }
}

fn check_len(spectrum: &EnergySpectrum, len: usize) -> Result<()> {
    if spectrum.len() != len {
        return Err(Error::DimensionMismatch { expected: spectrum.len(), got: len });
    }
    Ok(())
}

/// Parameters of `|α, k⟩ = Δ^k |α⟩` with optional per-level phases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherentLadderParams {
    pub alpha: C64,
    pub k: i64,
    pub truncation: usize,
    pub phases: Option<Vec<f64>>,
}

impl CoherentLadderParams {
    pub fn new(alpha: C64, k: i64, truncation: usize) -> Self {
        Self { alpha, k, truncation, phases: None }
    }

    pub fn with_phases(mut self, phases: Vec<f64>) -> Self {
        self.phases = Some(phases);
        self
    }
}

/// Truncated coherent amplitudes `e^{iθ_n} e^{−|α|²/2} αⁿ/√n!`, not yet
/// renormalized.
pub fn coherent_amplitudes(alpha: C64, truncation: usize, phases: Option<&[f64]>) -> Result<Vec<C64>> {
    if truncation == 0 {
        return Err(Error::TruncationTooSmall { tail: 1.0, bound: TAIL_BOUND });
    }
    let tail = poisson_tail(alpha.norm_sqr(), truncation);
    if tail >= TAIL_BOUND {
        return Err(Error::TruncationTooSmall { tail, bound: TAIL_BOUND });
    }
    if let Some(ph) = phases {
        if ph.len() != truncation {
            return Err(Error::DimensionMismatch { expected: truncation, got: ph.len() });
        }
    }
    let mut amps = Vec::with_capacity(truncation);
    let mut a = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..truncation {
        if n > 0 {
            a *= alpha / (n as f64).sqrt();
        }
        let theta = phases.map(|p| p[n]).unwrap_or(0.0);
        amps.push(a * C64::from_polar(1.0, theta));
    }
    Ok(amps)
}

/// `|α, k⟩` on the unit ladder `[k, k + truncation)`.
pub fn make_coherent_state(params: &CoherentLadderParams) -> Result<LadderState> {
    let amps = coherent_amplitudes(params.alpha, params.truncation, params.phases.as_deref())?;
    LadderState::normalized(EnergySpectrum::ladder(params.k, params.truncation), amps)
}

/// `|α⟩` of the oscillator `hν(a†a + ½)` truncated to `truncation` levels.
pub fn oscillator_coherent_state(alpha: C64, h_nu: f64, truncation: usize) -> Result<LadderState> {
    let amps = coherent_amplitudes(alpha, truncation, None)?;
    LadderState::normalized(EnergySpectrum::oscillator(h_nu, truncation), amps)
}

/// Density matrix in the energy eigenbasis. `energies[i]` belongs to basis
/// vector `i`; the energies need not be sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    energies: Vec<f64>,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity (eigenvalue floor −1e-12).
    pub fn new(energies: Vec<f64>, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() != energies.len() {
            return Err(Error::DimensionMismatch { expected: energies.len(), got: matrix.nrows() });
        }
        if hermiticity_residual(&matrix) > 1e-10 {
            return Err(Error::InvalidState("density matrix not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let min_eig = hermitian_eigenvalues(&matrix).first().copied().unwrap_or(0.0);
        if min_eig < -1e-12 {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig}")));
        }
        Ok(Self { energies, matrix })
    }

    /// Incoherent state with the given weights.
    pub fn diagonal(energies: Vec<f64>, weights: &[f64]) -> Result<Self> {
        let d = CVector::from_iterator(weights.len(), weights.iter().map(|&w| C64::new(w, 0.0)));
        Self::new(energies, CMatrix::from_diagonal(&d))
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energy_statistics(&self) -> EnergyStatistics {
        EnergyStatistics::new(
            self.energies.clone(),
            (0..self.dim()).map(|i| self.matrix[(i, i)].re.max(0.0)).collect(),
        )
    }

    /// `e^{−iHt} ρ e^{iHt}`.
    pub fn evolve(&self, t: f64) -> Self {
        let e = &self.energies;
        let matrix = CMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            self.matrix[(i, j)] * C64::from_polar(1.0, -(e[i] - e[j]) * t)
        });
        Self { energies: self.energies.clone(), matrix }
    }

    /// Dephased copy `D(ρ)`.
    pub fn dephased(&self) -> Self {
        let d = self.matrix.diagonal();
        Self { energies: self.energies.clone(), matrix: CMatrix::from_diagonal(&d) }
    }

    /// `ρ ⊗ σ` with energies `E_i + E'_j`.
    pub fn tensor(&self, other: &Self) -> Self {
        let energies = self
            .energies
            .iter()
            .flat_map(|&a| other.energies.iter().map(move |&b| a + b))
            .collect();
        Self { energies, matrix: crate::linalg::kron(&self.matrix, &other.matrix) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_shifted_is_eigenstate() {
        let s = make_coherent_state(&CoherentLadderParams::new(C64::new(0.0, 0.0), 3, 1)).unwrap();
        assert_eq!(s.energy_distribution(), EnergyDistribution::point(3));
    }

    #[test]
    fn coherent_weight_at_zero_is_poisson() {
        let s = make_coherent_state(&CoherentLadderParams::new(C64::new(1.0, 0.0), 0, 40)).unwrap();
        let w0 = s.energy_distribution().weight(0);
        assert!((w0 - (-1.0_f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn short_truncation_is_rejected() {
        let r = make_coherent_state(&CoherentLadderParams::new(C64::new(2.0, 0.0), 0, 8));
        assert!(matches!(r, Err(Error::TruncationTooSmall { .. })));
    }

    #[test]
    fn uniform_superposition_distribution() {
        let h = C64::new(0.5, 0.0);
        let s = LadderState::new(EnergySpectrum::ladder(0, 4), vec![h; 4]).unwrap();
        let d = s.energy_distribution();
        assert!(d.weights().iter().all(|&w| (w - 0.25).abs() < 1e-15));
    }

    #[test]
    fn evolution_keeps_distribution() {
        let s = make_coherent_state(&CoherentLadderParams::new(C64::new(0.7, 0.2), 1, 30)).unwrap();
        let e = s.evolve(1.3);
        assert!(e.energy_distribution().sup_distance(&s.energy_distribution()) < 1e-15);
    }

    #[test]
    fn density_matrix_rejects_negative() {
        assert!(DensityMatrix::diagonal(vec![0.0, 1.0], &[1.2, -0.2]).is_err());
        assert!(DensityMatrix::diagonal(vec![0.0, 1.0], &[0.4, 0.6]).is_ok());
    }
}
