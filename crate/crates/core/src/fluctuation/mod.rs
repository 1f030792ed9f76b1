//! Crooks-type fluctuation relations for coherent system states exchanging
//! energy with a two-block bath.

mod bath;
mod channel;
mod crooks;
mod macroscopic;
mod protocol;
mod semiclassical;
mod tpm;

pub use bath::{BathModel, BathThermals};
pub use channel::complementary_channel;
pub use crooks::{
    coherent_work_ft_check, constraint_projector, crooks_check, crooks_evaluate, exponent_forms, trajectory_probability,
    CoherentWorkFtReport, CrooksReport, ExponentForms, FtSign, FT_MATCH_TOL, REVERSE_FLOOR,
};
pub use macroscopic::{
    iid_limit_check, multipartite_bound_check, IidReport, IidRow, MultipartiteReport, DEVIATION_FLOOR, QUADRUPLING_RATIO,
};
pub use protocol::{composite_energies, energy_eigenspaces, sample_protocol_unitary, ProtocolUnitary, PROTOCOL_TOL};
pub use semiclassical::{coherent_truncation, semiclassical_relation, thermal_energy, SemiclassicalReport};
pub use tpm::{tpm_average_work, TpmOutcome, TpmReport};
