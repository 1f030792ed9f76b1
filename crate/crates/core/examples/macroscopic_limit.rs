// Many copies: the effective potential approaches its Gaussian form, and
// entanglement depth bounds the quadratic correction.

use coherent_work::fluctuation::{iid_limit_check, multipartite_bound_check};
use coherent_work::ladder::{EnergyDistribution, LadderState};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let psi = LadderState::from_distribution(&EnergyDistribution::new(0, vec![0.85, 0.15])?, None)?;
    let phi = LadderState::eigenstate(0);
    let rep = iid_limit_check(&psi, &phi, &[4, 16, 64, 256], 1.0, 1.0)?;
    for row in &rep.rows {
        println!("n {:>4}: beta {:.5}, deviation {:.3e}", row.n, row.beta, row.deviation);
    }
    assert!(rep.decay_ok);

    let n = 6;
    let mut ghz = vec![0.0; n + 1];
    ghz[0] = 0.5;
    ghz[n] = 0.5;
    let ghz = EnergyDistribution::new(0, ghz)?;
    for k in [n, 3] {
        match multipartite_bound_check(&ghz, n, k, 1.0, 0.2, 0.0, 0.0) {
            Ok(r) => println!("k = {k}: 4Var {} <= {} , exponent bound {:.4} + {}", r.four_variance, r.variance_bound, r.exponent_bound, r.remainder),
            Err(e) => println!("k = {k}: {e}"),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
