// Two-point measurement work against the operator average.

use coherent_work::fluctuation::tpm_average_work;
use coherent_work::ladder::{EnergySpectrum, LadderState};
use coherent_work::linalg::{hermitian_propagator, CMatrix, C64};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let h = EnergySpectrum::new(0, vec![0.0, 1.0, 3.0], 1e-9)?;
    let k = CMatrix::from_fn(3, 3, |i, j| C64::new(1.0 / (1 + i + j) as f64, 0.0));
    let u = hermitian_propagator(&k, 1.3);
    let psi = LadderState::normalized(h.clone(), vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(1.0, 1.0)])?;

    let coherent = tpm_average_work(&psi.density_matrix(), &u, &h, &h)?;
    let dephased = tpm_average_work(&psi.density_matrix().dephased(), &u, &h, &h)?;
    println!("coherent input: W_tpm {:.6}, operator {:.6}, gap {:.3e}", coherent.w_tpm, coherent.w_operator, coherent.gap);
    println!("dephased input: W_tpm {:.6}, operator {:.6}, gap {:.3e}", dephased.w_tpm, dephased.w_operator, dephased.gap);
    for o in &coherent.outcomes {
        println!("  w = {:+.1}: probability {:.6}", o.work, o.probability);
    }
    assert!(dephased.gap < 1e-12);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
