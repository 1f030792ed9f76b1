//! States, spectra and energy distributions on integer-indexed ladders.

mod disorder;
mod distribution;
mod spectrum;
mod state;
mod statistics;

pub use disorder::{disorder, disorder_of_weights, majorizes, majorizes_weights, DisorderFunctional, MAJORIZATION_TOL};
pub use distribution::{
    convolution_power, convolve, poisson_pmf, poisson_tail, EnergyDistribution, NORM_TOL, WEIGHT_FLOOR,
};
pub use spectrum::{EnergySpectrum, DEGENERACY_TOL};
pub use state::{
    coherent_amplitudes, make_coherent_state, oscillator_coherent_state, CoherentLadderParams, DensityMatrix,
    LadderState, TAIL_BOUND,
};
pub use statistics::{scaled_statistics, EnergyStatistics};
