#![allow(dead_code)]

use coherent_work::ladder::{DensityMatrix, EnergyDistribution, EnergySpectrum, LadderState};
use coherent_work::linalg::{hermitian_propagator, CMatrix, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

pub fn complex(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(gaussian(rng), gaussian(rng))
}

/// Sorted random levels, integers in `0..=max` when `integer`, else uniform in `[lo, hi]`.
pub fn levels(rng: &mut ChaCha8Rng, n: usize, integer: bool, lo: f64, hi: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|_| if integer { rng.random_range(lo as i64..=hi as i64) as f64 } else { rng.random_range(lo..hi) })
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn spectrum(levels: Vec<f64>) -> EnergySpectrum {
    EnergySpectrum::new(0, levels, 1e-9).unwrap()
}

pub fn random_state(rng: &mut ChaCha8Rng, spectrum: EnergySpectrum) -> LadderState {
    let amps = (0..spectrum.len()).map(|_| complex(rng)).collect();
    LadderState::normalized(spectrum, amps).unwrap()
}

pub fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

pub fn random_distribution(rng: &mut ChaCha8Rng, offset: i64, n: usize) -> EnergyDistribution {
    EnergyDistribution::from_unnormalized(offset, random_weights(rng, n)).unwrap()
}

pub fn random_density(rng: &mut ChaCha8Rng, energies: Vec<f64>) -> DensityMatrix {
    let d = energies.len();
    let g = CMatrix::from_fn(d, d, |_, _| complex(rng));
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    DensityMatrix::new(energies, rho / tr).unwrap()
}

pub fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| complex(rng));
    hermitian_propagator(&(&g + g.adjoint()), 1.0)
}
