// Build an energy-conserving unitary that moves a superposition up the
// ladder while a work system absorbs the energy coherently.

use coherent_work::cwp::{
    apply_cwp, beam_splitter_process, build_cwp_unitary, disorder_monotone_check, infer_work_distribution,
};
use coherent_work::ladder::{DisorderFunctional, EnergyDistribution, LadderState};
use coherent_work::linalg::C64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = EnergyDistribution::uniform(&[0, 1, 2, 3])?;
    let q = EnergyDistribution::uniform(&[5, 6])?;
    let r = EnergyDistribution::uniform(&[-5, -3])?;
    let v = build_cwp_unitary(&p, &q, &r, None, None)?;
    v.validate()?;
    println!("{} total-energy blocks, dim {}", v.blocks.len(), v.dim());

    let record = apply_cwp(&v, &LadderState::from_distribution(&p, None)?)?;
    println!("product fidelity {:.15}", record.product_fidelity);
    println!("output {:?}", record.output.energy_distribution().trimmed());
    println!("work {:?}", record.work_state.energy_distribution().trimmed());
    println!("reversible: {}", record.reversible);

    for f in [DisorderFunctional::Shannon, DisorderFunctional::Renyi(0.5)] {
        let d = disorder_monotone_check(&record, f)?;
        println!("{f:?}: in {:.4} out {:.4} work {:.4}", d.f_in, d.f_out, d.f_work);
        assert!(d.holds);
    }

    let inferred = infer_work_distribution(&record.input, &record.output)?;
    assert!(inferred.sup_distance(&r) < 1e-9);

    let bs = beam_splitter_process(C64::new(1.1, 0.3), 0.6, 50)?;
    println!("beam splitter: output alpha {:.4}, work alpha {:.4}, fidelities {:.12} / {:.12}",
        bs.output_alpha, bs.work_alpha, bs.output_fidelity, bs.work_fidelity);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
