// The effective potential of a pure state and what it says about coherence.

use coherent_work::ladder::oscillator_coherent_state;
use coherent_work::linalg::C64;
use coherent_work::potential::{
    check_potential_properties, effective_potential, mean_coherence, variational_potential,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (h_nu, alpha) = (1.0, C64::new(1.2, -0.4));
    let psi = oscillator_coherent_state(alpha, h_nu, 60)?;
    let stats = psi.energy_statistics();
    for beta in [0.1, 1.0, 3.0] {
        let rep = effective_potential(beta, &stats, 4)?;
        let closed = beta * h_nu / 2.0 + alpha.norm_sqr() * (1.0 - (-beta * h_nu).exp());
        let m = mean_coherence(&stats, beta)?;
        println!(
            "beta {beta}: lambda {:.10} (closed form {:.10}), chi_m {:.6}, beta_m {:.6}",
            rep.value, closed, m.chi_m, m.beta_m
        );
        assert!((rep.value - closed).abs() < 1e-8);
    }

    let v = variational_potential(1.0, &stats)?;
    println!("variational value {:.12} vs direct {:.12}", v.value, v.lambda_direct);

    let grid: Vec<f64> = (0..=64).map(|i| i as f64 * 0.1).collect();
    let props = check_potential_properties(&stats, &grid)?;
    println!("property checks hold: {}", props.holds());
    assert!(props.holds(), "{:?}", props.violations);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
