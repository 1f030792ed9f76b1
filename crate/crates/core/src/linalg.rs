//! Dense complex linear-algebra helpers shared by the process and fluctuation
//! modules. Everything here works on small matrices (dimension up to a few
//! hundred) and favours clarity over speed.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Largest entry modulus.
pub fn sup_norm(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `‖U†U − I‖_sup`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let n = u.ncols();
    let gram = u.adjoint() * u;
    sup_norm(&(gram - CMatrix::identity(n, n)))
}

/// `‖[M, diag(energies)]‖_sup`.
pub fn commutator_residual(m: &CMatrix, energies: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let c = m[(i, j)] * (energies[j] - energies[i]);
            worst = worst.max(c.norm());
        }
    }
    worst
}

/// `‖M − Mᵀ‖_sup` (plain transpose, no conjugation).
pub fn transpose_residual(m: &CMatrix) -> f64 {
    sup_norm(&(m - m.transpose()))
}

/// `‖M − M†‖_sup`.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    sup_norm(&(m - m.adjoint()))
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMatrix::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Kronecker product of two vectors, first factor major.
pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    CVector::from_fn(a.len() * b.len(), |i, _| a[i / b.len()] * b[i % b.len()])
}

/// Trace out the first factor of a state on `C^{d1} ⊗ C^{d2}`.
pub fn partial_trace_first(rho: &CMatrix, d1: usize, d2: usize) -> CMatrix {
    CMatrix::from_fn(d2, d2, |i, j| {
        (0..d1).map(|k| rho[(k * d2 + i, k * d2 + j)]).sum()
    })
}

/// Trace out the second factor of a state on `C^{d1} ⊗ C^{d2}`.
pub fn partial_trace_second(rho: &CMatrix, d1: usize, d2: usize) -> CMatrix {
    CMatrix::from_fn(d1, d1, |i, j| {
        (0..d2).map(|k| rho[(i * d2 + k, j * d2 + k)]).sum()
    })
}

/// Outer product `|a⟩⟨b|`.
pub fn outer(a: &CVector, b: &CVector) -> CMatrix {
    a * b.adjoint()
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let sym = (m + m.adjoint()).scale(0.5);
    let mut vals: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// `exp(−i t K)` for Hermitian `K`, through its eigendecomposition.
pub fn hermitian_propagator(k: &CMatrix, t: f64) -> CMatrix {
    let n = k.nrows();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let sym = (k + k.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let phases = CMatrix::from_diagonal(&CVector::from_iterator(
        n,
        eig.eigenvalues.iter().map(|&l| C64::from_polar(1.0, -l * t)),
    ));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

/// `exp(iA)` for real symmetric `A`. With `A = Q D Qᵀ` and real `Q` the
/// result `Q e^{iD} Qᵀ` is complex symmetric as well as unitary.
pub fn real_symmetric_exp_i(a: &DMatrix<f64>) -> CMatrix {
    let n = a.nrows();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let sym = (a + a.transpose()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let q = eig.eigenvectors.map(|x| C64::new(x, 0.0));
    let phases = CMatrix::from_diagonal(&CVector::from_iterator(
        n,
        eig.eigenvalues.iter().map(|&l| C64::from_polar(1.0, l)),
    ));
    &q * phases * q.transpose()
}

/// Dominant singular triple `(σ₁, u, v)` with `M ≈ σ₁ u v†`.
pub fn dominant_singular_pair(m: &CMatrix) -> (f64, CVector, CVector) {
    let svd = m.clone().svd(true, true);
    let (mut best, mut idx) = (f64::NEG_INFINITY, 0);
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > best {
            best = s;
            idx = i;
        }
    }
    let u = svd.u.expect("u requested").column(idx).into_owned();
    let v_t = svd.v_t.expect("v_t requested");
    let v = v_t.row(idx).adjoint();
    (best, u, v)
}

/// Complete `first` (unit norm) to a unitary whose column `slot` is `first`.
///
/// The remaining columns come from modified Gram–Schmidt (two passes)
/// against the standard basis taken in index order, so the result is
/// deterministic.
pub fn complete_to_unitary(first: &CVector, slot: usize) -> CMatrix {
    let n = first.len();
    let mut cols: Vec<CVector> = Vec::with_capacity(n);
    cols.push(first.clone());
    for k in 0..n {
        if cols.len() == n {
            break;
        }
        let mut v = CVector::zeros(n);
        v[k] = ONE;
        for _ in 0..2 {
            for c in &cols {
                let proj = c.dotc(&v);
                v -= c * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            cols.push(v.unscale(norm));
        }
    }
    // cols[0] is `first`; the rest fill the other slots in order.
    let mut out = CMatrix::zeros(n, n);
    let mut rest = cols.into_iter();
    let head = rest.next().expect("first column");
    out.set_column(slot, &head);
    for j in (0..n).filter(|&j| j != slot) {
        let c = rest.next().expect("Gram-Schmidt produced a full basis");
        out.set_column(j, &c);
    }
    out
}

/// Fidelity `|⟨a|b⟩|²` between two unit vectors.
pub fn fidelity(a: &CVector, b: &CVector) -> f64 {
    a.dotc(b).norm_sqr()
}

/// Serde adapter storing a complex matrix as rows of `[re, im]` pairs.
pub mod cmatrix_serde {
    use super::{CMatrix, C64};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<C64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let rows = Vec::<Vec<C64>>::deserialize(d)?;
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        Ok(CMatrix::from_fn(n, m, |i, j| rows[i][j]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_symmetric_exp_is_symmetric_unitary() {
        let a = DMatrix::from_row_slice(3, 3, &[0.3, -1.2, 0.5, -1.2, 2.0, 0.1, 0.5, 0.1, -0.7]);
        let v = real_symmetric_exp_i(&a);
        assert!(unitarity_residual(&v) < 1e-13);
        assert!(transpose_residual(&v) < 1e-13);
    }

    #[test]
    fn completion_keeps_first_column() {
        let s = 0.5_f64.sqrt();
        let first = CVector::from_vec(vec![ZERO, C64::new(s, 0.0), C64::new(0.0, s)]);
        let u = complete_to_unitary(&first, 1);
        assert!(unitarity_residual(&u) < 1e-14);
        assert!((u.column(1) - &first).norm() < 1e-15);
    }

    #[test]
    fn partial_traces_of_product() {
        let a = CMatrix::from_diagonal(&CVector::from_vec(vec![C64::new(0.25, 0.0), C64::new(0.75, 0.0)]));
        let b = CMatrix::from_diagonal(&CVector::from_vec(vec![
            C64::new(0.5, 0.0),
            C64::new(0.3, 0.0),
            C64::new(0.2, 0.0),
        ]));
        let ab = kron(&a, &b);
        assert!(sup_norm(&(partial_trace_first(&ab, 2, 3) - &b)) < 1e-15);
        assert!(sup_norm(&(partial_trace_second(&ab, 2, 3) - &a)) < 1e-15);
    }

    #[test]
    fn propagator_matches_phase_on_diagonal() {
        let k = CMatrix::from_diagonal(&CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(-2.0, 0.0)]));
        let u = hermitian_propagator(&k, 0.3);
        assert!((u[(0, 0)] - C64::from_polar(1.0, -0.3)).norm() < 1e-14);
        assert!((u[(1, 1)] - C64::from_polar(1.0, 0.6)).norm() < 1e-14);
    }
}
