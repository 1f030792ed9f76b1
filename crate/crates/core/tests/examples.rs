mod ladder_states_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/ladder_states.rs"));
}

#[test]
fn ladder_states_example_runs() {
    ladder_states_example::run_example().expect("ladder_states example should run");
}

mod decomposition_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/decomposition.rs"));
}

#[test]
fn decomposition_example_runs() {
    decomposition_example::run_example().expect("decomposition example should run");
}

mod coherent_work_process_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/coherent_work_process.rs"));
}

#[test]
fn coherent_work_process_example_runs() {
    coherent_work_process_example::run_example().expect("coherent_work_process example should run");
}

mod effective_potential_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/effective_potential.rs"));
}

#[test]
fn effective_potential_example_runs() {
    effective_potential_example::run_example().expect("effective_potential example should run");
}

mod coherent_crooks_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/coherent_crooks.rs"));
}

#[test]
fn coherent_crooks_example_runs() {
    coherent_crooks_example::run_example().expect("coherent_crooks example should run");
}

mod semiclassical_oscillator_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/semiclassical_oscillator.rs"));
}

#[test]
fn semiclassical_oscillator_example_runs() {
    semiclassical_oscillator_example::run_example().expect("semiclassical_oscillator example should run");
}

mod macroscopic_limit_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/macroscopic_limit.rs"));
}

#[test]
fn macroscopic_limit_example_runs() {
    macroscopic_limit_example::run_example().expect("macroscopic_limit example should run");
}

mod tpm_discrepancy_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/tpm_discrepancy.rs"));
}

#[test]
fn tpm_discrepancy_example_runs() {
    tpm_discrepancy_example::run_example().expect("tpm_discrepancy example should run");
}
