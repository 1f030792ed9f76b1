// Energy ladders, coherent states and disorder of energy distributions.

use coherent_work::ladder::{
    disorder, make_coherent_state, majorizes, CoherentLadderParams, DisorderFunctional, EnergyDistribution,
};
use coherent_work::linalg::C64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let alpha = C64::new(1.5, 0.5);
    let psi = make_coherent_state(&CoherentLadderParams::new(alpha, 3, 40))?;
    let stats = psi.energy_statistics();
    println!("|alpha|^2 = {:.6}", alpha.norm_sqr());
    println!("mean = {:.6} (shift 3 + |alpha|^2), variance = {:.6}", stats.mean(), stats.variance());
    assert!((stats.mean() - 3.0 - alpha.norm_sqr()).abs() < 1e-9);

    // Free evolution leaves the energy distribution alone.
    let later = psi.evolve(2.7);
    assert!(later.energy_distribution().sup_distance(&psi.energy_distribution()) < 1e-15);

    let sharp = EnergyDistribution::new(0, vec![0.7, 0.2, 0.1])?;
    let flat = EnergyDistribution::uniform(&[0, 1, 2])?;
    println!("flat is majorized by sharp: {}", majorizes(&sharp, &flat));
    for f in [DisorderFunctional::Shannon, DisorderFunctional::Renyi(2.0), DisorderFunctional::MaxWeightNegated] {
        println!("{f:?}: sharp {:.4}, flat {:.4}", disorder(&sharp, f)?, disorder(&flat, f)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
