// Coherent states of an oscillator: the Crooks exponent in terms of an
// averaged bath work and the thermal energy.

use coherent_work::fluctuation::{semiclassical_relation, thermal_energy, BathModel};
use coherent_work::ladder::EnergySpectrum;
use coherent_work::linalg::C64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let bath = BathModel::new(EnergySpectrum::ladder(0, 4), EnergySpectrum::ladder(0, 2));
    let h_nu = 0.8;
    for beta in [0.01, 0.3, 1.0, 10.0] {
        let r = semiclassical_relation(C64::new(1.5, 0.0), C64::new(0.4, 0.9), beta, h_nu, &bath)?;
        println!(
            "beta {beta}: h nu_th {:.6} (kT {:.3}), W_B {:.6}, exponent {:.12} vs {:.12}, de Broglie {:.4}",
            r.thermal_energy,
            1.0 / beta,
            r.w_b_bar,
            r.exact_exponent,
            r.semiclassical_exponent,
            r.de_broglie_wavelength(1.0, 1.0)
        );
        assert!(r.gap < 1e-9);
    }
    println!("zero-temperature limit h nu_th = {:.6}", thermal_energy(h_nu, 200.0));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
