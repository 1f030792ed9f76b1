// Forward and reverse trajectory probabilities for coherent system states
// and a bath that switches Hamiltonian blocks.

use coherent_work::fluctuation::{
    composite_energies, crooks_check, exponent_forms, sample_protocol_unitary, BathModel,
};
use coherent_work::ladder::{EnergySpectrum, LadderState};
use coherent_work::linalg::C64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let system = EnergySpectrum::ladder(0, 3);
    let psi0 = LadderState::normalized(system.clone(), vec![C64::new(0.8, 0.0), C64::new(0.0, 0.5), C64::new(0.3, 0.1)])?;
    let psi1 = LadderState::normalized(system.clone(), vec![C64::new(0.2, 0.2), C64::new(0.6, 0.0), C64::new(0.0, -0.7)])?;
    let bath = BathModel::new(EnergySpectrum::new(0, vec![0.0, 1.0, 2.0], 1e-9)?, EnergySpectrum::new(0, vec![0.0, 1.0, 1.0, 3.0], 1e-9)?);
    let energies = composite_energies(system.levels(), &bath.energies());

    for seed in 0..3 {
        let v = sample_protocol_unitary(&energies, seed);
        for beta in [0.1, 1.0, 5.0] {
            let r = crooks_check(&psi0, &psi1, &bath, &v, beta)?;
            println!(
                "seed {seed} beta {beta}: P_fwd {:.6e} P_rev {:.6e} ratio {:.10} e^rhs {:.10}",
                r.p_forward,
                r.p_reverse,
                r.lhs_ratio.unwrap_or(f64::NAN),
                r.rhs_exponent.exp()
            );
            assert!(r.agreement.unwrap() <= 1e-9);
        }
    }

    let beta = 0.5;
    let f = exponent_forms(&psi0.energy_statistics(), &psi1.energy_statistics(), bath.thermals(beta).beta_delta_f, beta)?;
    println!("exponent forms at beta {beta}: {f:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
