use super::protocol::ProtocolUnitary;
use crate::error::{Error, Result};
use crate::ladder::DensityMatrix;
use crate::linalg::partial_trace_first;

/// `tr_S V (ρ ⊗ γ₀) V†`, the state left on the bath.
pub fn complementary_channel(v: &ProtocolUnitary, rho: &DensityMatrix, gibbs0: &DensityMatrix) -> Result<DensityMatrix> {
    let joint = rho.tensor(gibbs0);
    if joint.dim() != v.dim() {
        return Err(Error::DimensionMismatch { expected: v.dim(), got: joint.dim() });
    }
    let out = v.matrix() * joint.matrix() * v.matrix().adjoint();
    let reduced = partial_trace_first(&out, rho.dim(), gibbs0.dim());
    let reduced = (&reduced + reduced.adjoint()) * crate::linalg::C64::new(0.5, 0.0);
    DensityMatrix::new(gibbs0.energies().to_vec(), reduced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fluctuation::bath::BathModel;
    use crate::fluctuation::protocol::{composite_energies, sample_protocol_unitary};
    use crate::ladder::{EnergySpectrum, LadderState};
    use crate::linalg::{sup_norm, C64};

    #[test]
    fn identity_returns_gibbs_and_covariance_holds() {
        let bath = BathModel::new(EnergySpectrum::ladder(0, 3), EnergySpectrum::ladder(0, 2));
        let g0 = bath.gibbs_state(0, 0.6).unwrap();
        let s = EnergySpectrum::ladder(0, 3);
        let psi = LadderState::normalized(s.clone(), vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.5, 0.5)]).unwrap();
        let rho = psi.density_matrix();
        let e = composite_energies(s.levels(), &bath.energies());

        let id = ProtocolUnitary::identity(e.clone());
        let out = complementary_channel(&id, &rho, &g0).unwrap();
        assert!(sup_norm(&(out.matrix() - g0.matrix())) < 1e-14);

        let v = sample_protocol_unitary(&e, 11);
        let t = 0.83;
        let a = complementary_channel(&v, &rho.evolve(t), &g0).unwrap();
        let b = complementary_channel(&v, &rho, &g0).unwrap().evolve(t);
        assert!(sup_norm(&(a.matrix() - b.matrix())) < 1e-10);
    }
}
