use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ladder::{DensityMatrix, EnergySpectrum};
use crate::linalg::{cmatrix_serde, unitarity_residual, CMatrix, CVector, C64};

/// One outcome of the two-point measurement scheme.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TpmOutcome {
    pub work: f64,
    pub probability: f64,
    /// `Σ Π_i U† Π'_j U Π_i` over the eigenspace pairs with this work value.
    #[serde(with = "cmatrix_serde")]
    pub povm: CMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TpmReport {
    /// Outcomes sorted by work value.
    pub outcomes: Vec<TpmOutcome>,
    pub w_tpm: f64,
    /// `tr[(U† H_f U − H_i) ρ]`.
    pub w_operator: f64,
    pub gap: f64,
}

fn projector(dim: usize, members: &[usize]) -> CMatrix {
    let d = CVector::from_fn(dim, |i, _| if members.contains(&i) { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
    CMatrix::from_diagonal(&d)
}

fn diag(s: &EnergySpectrum) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(s.len(), s.levels().iter().map(|&e| C64::new(e, 0.0))))
}

/// Average work from projective energy measurements before and after `U`,
/// next to the operator average.
pub fn tpm_average_work(rho: &DensityMatrix, u: &CMatrix, h_i: &EnergySpectrum, h_f: &EnergySpectrum) -> Result<TpmReport> {
    let d = rho.dim();
    for got in [u.nrows(), u.ncols(), h_i.len(), h_f.len()] {
        if got != d {
            return Err(Error::DimensionMismatch { expected: d, got });
        }
    }
    if unitarity_residual(u) > 1e-10 {
        return Err(Error::InvalidUnitary("tpm evolution is not unitary".into()));
    }
    let ud = u.adjoint();
    let mut outcomes: Vec<TpmOutcome> = Vec::new();
    for (e_i, mi) in h_i.eigenspaces() {
        let pi = projector(d, &mi);
        let dephased = &pi * rho.matrix() * &pi;
        for (e_f, mf) in h_f.eigenspaces() {
            let pf = projector(d, &mf);
            let element = &pi * &ud * &pf * u * &pi;
            let probability = (&pf * u * &dephased * &ud).trace().re;
            let work = e_f - e_i;
            match outcomes.iter_mut().find(|o| (o.work - work).abs() <= 1e-9) {
                Some(o) => {
                    o.probability += probability;
                    o.povm += element;
                }
                None => outcomes.push(TpmOutcome { work, probability, povm: element }),
            }
        }
    }
    outcomes.sort_by(|a, b| a.work.total_cmp(&b.work));
    let w_tpm = outcomes.iter().map(|o| o.work * o.probability).sum();
    let w_operator = ((ud * diag(h_f) * u - diag(h_i)) * rho.matrix()).trace().re;
    Ok(TpmReport { outcomes, w_tpm, w_operator, gap: (w_tpm - w_operator).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_propagator;

    #[test]
    fn incoherent_states_agree() {
        let h = EnergySpectrum::new(0, vec![0.0, 1.0, 2.5], 1e-9).unwrap();
        let k = CMatrix::from_fn(3, 3, |i, j| C64::new((i + j) as f64 * 0.3, i as f64 - j as f64));
        let u = hermitian_propagator(&(&k + k.adjoint()), 1.0);
        let rho = DensityMatrix::diagonal(h.levels().to_vec(), &[0.5, 0.3, 0.2]).unwrap();
        let r = tpm_average_work(&rho, &u, &h, &h).unwrap();
        assert!(r.gap < 1e-12, "{r:?}");
        let total: CMatrix = r.outcomes.iter().map(|o| o.povm.clone()).fold(CMatrix::zeros(3, 3), |a, b| a + b);
        assert!((total - CMatrix::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn identity_gives_zero_work() {
        let h = EnergySpectrum::ladder(0, 3);
        let rho = DensityMatrix::diagonal(h.levels().to_vec(), &[0.2, 0.3, 0.5]).unwrap();
        let r = tpm_average_work(&rho, &CMatrix::identity(3, 3), &h, &h).unwrap();
        assert_eq!(r.w_tpm, 0.0);
    }
}
