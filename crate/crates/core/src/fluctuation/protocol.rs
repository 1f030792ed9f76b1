use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::ladder::DEGENERACY_TOL;
use crate::linalg::{
    commutator_residual, real_symmetric_exp_i, transpose_residual, unitarity_residual, CMatrix,
};

/// Residual bound for unitarity, symmetry and energy conservation.
pub const PROTOCOL_TOL: f64 = 1e-10;

/// Time-reversal symmetric (`V = Vᵀ`), energy-conserving unitary on a
/// composite space whose basis vector `i` has energy `energies[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolUnitary {
    energies: Vec<f64>,
    matrix: CMatrix,
    pub unitarity_residual: f64,
    pub symmetry_residual: f64,
    pub conservation_residual: f64,
}

impl ProtocolUnitary {
    /// Validate a given matrix against all three residual bounds.
    pub fn from_matrix(energies: Vec<f64>, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != energies.len() || matrix.ncols() != energies.len() {
            return Err(Error::DimensionMismatch { expected: energies.len(), got: matrix.nrows() });
        }
        let p = Self::unchecked(energies, matrix);
        for (name, r) in [
            ("unitarity", p.unitarity_residual),
            ("symmetry", p.symmetry_residual),
            ("energy conservation", p.conservation_residual),
        ] {
            if !(r <= PROTOCOL_TOL) {
                return Err(Error::InvalidUnitary(format!("{name} residual {r:e}")));
            }
        }
        Ok(p)
    }

    fn unchecked(energies: Vec<f64>, matrix: CMatrix) -> Self {
        Self {
            unitarity_residual: unitarity_residual(&matrix),
            symmetry_residual: transpose_residual(&matrix),
            conservation_residual: commutator_residual(&matrix, &energies),
            energies,
            matrix,
        }
    }

    pub fn identity(energies: Vec<f64>) -> Self {
        let n = energies.len();
        Self::unchecked(energies, CMatrix::identity(n, n))
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }
}

/// Energies of `H_S ⊗ 1 + 1 ⊗ H_B`, S-major.
pub fn composite_energies(system: &[f64], bath: &[f64]) -> Vec<f64> {
    system.iter().flat_map(|&s| bath.iter().map(move |&b| s + b)).collect()
}

/// Groups of basis indices sharing a total energy, in ascending energy.
pub fn energy_eigenspaces(energies: &[f64]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..energies.len()).collect();
    order.sort_by(|&a, &b| energies[a].total_cmp(&energies[b]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match groups.last_mut() {
            Some(g) if energies[i] - energies[*g.last().unwrap()] <= DEGENERACY_TOL => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
}

/// In each total-energy eigenspace `V = exp(iA)` with `A` a seeded
/// real-symmetric Gaussian matrix.
pub fn sample_protocol_unitary(energies: &[f64], seed: u64) -> ProtocolUnitary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = energies.len();
    let mut v = CMatrix::zeros(n, n);
    for group in energy_eigenspaces(energies) {
        let m = group.len();
        let mut a = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            for j in 0..=i {
                let x: f64 = StandardNormal.sample(&mut rng);
                a[(i, j)] = x;
                a[(j, i)] = x;
            }
        }
        let block = real_symmetric_exp_i(&a);
        for (bi, &i) in group.iter().enumerate() {
            for (bj, &j) in group.iter().enumerate() {
                v[(i, j)] = block[(bi, bj)];
            }
        }
    }
    ProtocolUnitary::unchecked(energies.to_vec(), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    #[test]
    fn sampled_protocol_is_symmetric_and_conserving() {
        let e = composite_energies(&[0.0, 1.0, 2.0], &[0.0, 1.0, 1.0, 2.0]);
        let v = sample_protocol_unitary(&e, 7);
        assert!(v.unitarity_residual < 1e-12);
        assert!(v.symmetry_residual <= 1e-12);
        assert!(v.conservation_residual <= 1e-12);
        assert_eq!(v, sample_protocol_unitary(&e, 7));
        assert!(ProtocolUnitary::from_matrix(e, v.matrix().clone()).is_ok());
    }

    #[test]
    fn rejects_energy_mixing() {
        let e = vec![0.0, 1.0];
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(s, 0.0), C64::new(s, 0.0), C64::new(s, 0.0), C64::new(-s, 0.0)],
        );
        assert!(matches!(ProtocolUnitary::from_matrix(e, m), Err(Error::InvalidUnitary(_))));
    }
}
