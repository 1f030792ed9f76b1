// Which energy distributions split into two independent non-constant parts.

use coherent_work::decomposition::{canonical_form, deconvolve, raikov_split, DeconvolveOptions};
use coherent_work::ladder::{make_coherent_state, CoherentLadderParams, EnergyDistribution};
use coherent_work::linalg::C64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = EnergyDistribution::uniform(&[0, 1, 2, 3])?;
    let found = deconvolve(&p, &DeconvolveOptions::default())?;
    for f in &found.factors {
        println!("q = {:?}  r = {:?}  residual {:.1e}", f.q.weights(), f.r.weights(), f.residual);
    }
    assert!(!found.factors.is_empty());

    // Three equal levels do not split.
    let three = EnergyDistribution::uniform(&[0, 1, 2])?;
    let none = deconvolve(&three, &DeconvolveOptions::default())?;
    println!("uniform on three levels: {} factor pairs (best residual {:.2e})", none.factors.len(), none.residual);
    assert!(none.factors.is_empty());

    // Poisson laws only split into Poisson laws.
    let split = raikov_split(2.5, 1.0, 4, 1)?;
    println!("Poisson(2.5) shifted by 4 = Poisson({}) + Poisson({}), tv {:.1e}", split.mu, split.nu, split.reconvolution_tv(80)?);

    let psi = make_coherent_state(&CoherentLadderParams::new(C64::new(0.0, 1.3), -2, 40))?;
    let c = canonical_form(&psi)?;
    println!("canonical form: |alpha| = {:.6}, k = {}", c.alpha_abs, c.k);
    assert_eq!(c.k, -2);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
