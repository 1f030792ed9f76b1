//! Energy-conserving unitaries that realize coherent work processes
//! `|ψ₀⟩ ⊗ |0⟩ → |ψ₁⟩ ⊗ |ω⟩` on two unit-spaced ladders S and A.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::decomposition::TRIVIALITY_TOL;
use crate::error::{Error, Result};
use crate::ladder::{
    coherent_amplitudes, convolve, disorder, DisorderFunctional, EnergyDistribution, EnergySpectrum, LadderState,
};
use crate::linalg::{
    cmatrix_serde, complete_to_unitary, dominant_singular_pair, hermitian_propagator, unitarity_residual, CMatrix,
    CVector, C64, ONE, ZERO,
};
use crate::nnls::nnls;

/// Tolerance on `‖p − q ⊛ r‖_sup` when building a process.
pub const CONVOLUTION_TOL: f64 = 1e-10;

/// Product fidelity below `1 − PROCESS_TOL` means the output is entangled.
pub const PROCESS_TOL: f64 = 1e-8;

/// Residual allowed when inferring the work distribution.
pub const INFER_TOL: f64 = 1e-10;

/// One total-energy block. `basis[i] = (s, a)` with `s + a = energy`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitaryBlock {
    pub energy: i64,
    pub basis: Vec<(i64, i64)>,
    #[serde(with = "cmatrix_serde")]
    pub matrix: CMatrix,
}

/// Block-diagonal unitary on `C^{S} ⊗ C^{A}` with `H_tot = H_S ⊗ 1 + 1 ⊗ H_A`.
///
/// Composite basis order is S-major: `|s⟩|a⟩` sits at
/// `(s − s_lo) · dim_A + (a − a_lo)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyConservingUnitary {
    pub system_window: (i64, i64),
    pub aux_window: (i64, i64),
    pub blocks: Vec<UnitaryBlock>,
}

impl EnergyConservingUnitary {
    /// Identity on the given windows.
    pub fn identity(system_window: (i64, i64), aux_window: (i64, i64)) -> Self {
        Self::from_block_fn(system_window, aux_window, |_, basis| CMatrix::identity(basis.len(), basis.len()))
    }

    /// Build each block from `f(energy, basis)`.
    pub fn from_block_fn(
        system_window: (i64, i64),
        aux_window: (i64, i64),
        mut f: impl FnMut(i64, &[(i64, i64)]) -> CMatrix,
    ) -> Self {
        let (s_lo, s_hi) = system_window;
        let (a_lo, a_hi) = aux_window;
        let blocks = (s_lo + a_lo..=s_hi + a_hi)
            .map(|energy| {
                let basis: Vec<(i64, i64)> = (s_lo..=s_hi)
                    .filter(|s| (a_lo..=a_hi).contains(&(energy - s)))
                    .map(|s| (s, energy - s))
                    .collect();
                let matrix = f(energy, &basis);
                UnitaryBlock { energy, basis, matrix }
            })
            .collect();
        Self { system_window, aux_window, blocks }
    }

    pub fn dim_system(&self) -> usize {
        (self.system_window.1 - self.system_window.0 + 1) as usize
    }

    pub fn dim_aux(&self) -> usize {
        (self.aux_window.1 - self.aux_window.0 + 1) as usize
    }

    pub fn dim(&self) -> usize {
        self.dim_system() * self.dim_aux()
    }

    fn index(&self, s: i64, a: i64) -> usize {
        (s - self.system_window.0) as usize * self.dim_aux() + (a - self.aux_window.0) as usize
    }

    /// Total energies of the composite basis, in composite order.
    pub fn total_energies(&self) -> Vec<f64> {
        let (s_lo, s_hi) = self.system_window;
        let (a_lo, a_hi) = self.aux_window;
        (s_lo..=s_hi).flat_map(|s| (a_lo..=a_hi).map(move |a| (s + a) as f64)).collect()
    }

    /// `max_E ‖V_E† V_E − I‖_sup`.
    pub fn unitarity_residual(&self) -> f64 {
        self.blocks.iter().map(|b| unitarity_residual(&b.matrix)).fold(0.0, f64::max)
    }

    /// `‖V H_tot − H_tot V‖_sup` evaluated on the stored blocks.
    pub fn commutation_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for b in &self.blocks {
            for (i, &(si, ai)) in b.basis.iter().enumerate() {
                for (j, &(sj, aj)) in b.basis.iter().enumerate() {
                    let gap = ((si + ai) - (sj + aj)) as f64;
                    worst = worst.max(b.matrix[(i, j)].norm() * gap.abs());
                }
            }
        }
        worst
    }

    /// Every composite basis vector appears in exactly one block of the right
    /// energy and block shapes match their bases.
    pub fn validate(&self) -> Result<()> {
        let mut seen = vec![false; self.dim()];
        let (s_lo, s_hi) = self.system_window;
        let (a_lo, a_hi) = self.aux_window;
        if s_hi < s_lo || a_hi < a_lo {
            return Err(Error::InvalidUnitary("empty window".into()));
        }
        for b in &self.blocks {
            if b.matrix.nrows() != b.basis.len() || b.matrix.ncols() != b.basis.len() {
                return Err(Error::InvalidUnitary(format!("block {} has wrong shape", b.energy)));
            }
            for &(s, a) in &b.basis {
                if s + a != b.energy || !(s_lo..=s_hi).contains(&s) || !(a_lo..=a_hi).contains(&a) {
                    return Err(Error::InvalidUnitary(format!("basis pair ({s}, {a}) in block {}", b.energy)));
                }
                let k = self.index(s, a);
                if seen[k] {
                    return Err(Error::InvalidUnitary(format!("basis pair ({s}, {a}) repeated")));
                }
                seen[k] = true;
            }
        }
        if seen.iter().any(|x| !x) {
            return Err(Error::InvalidUnitary("blocks do not cover the composite space".into()));
        }
        Ok(())
    }

    /// Dense matrix in the composite basis. Only for small windows.
    pub fn full_matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim(), self.dim());
        for b in &self.blocks {
            for (i, &(si, ai)) in b.basis.iter().enumerate() {
                for (j, &(sj, aj)) in b.basis.iter().enumerate() {
                    m[(self.index(si, ai), self.index(sj, aj))] = b.matrix[(i, j)];
                }
            }
        }
        m
    }

    /// `V v` for a composite vector.
    pub fn apply(&self, v: &CVector) -> CVector {
        let mut out = CVector::zeros(v.len());
        for b in &self.blocks {
            let idx: Vec<usize> = b.basis.iter().map(|&(s, a)| self.index(s, a)).collect();
            for (i, &row) in idx.iter().enumerate() {
                out[row] = idx.iter().enumerate().map(|(j, &col)| b.matrix[(i, j)] * v[col]).sum();
            }
        }
        out
    }

    /// Composite vector of `state ⊗ |0⟩_A`.
    pub fn embed_input(&self, state: &LadderState) -> Result<CVector> {
        let (s_lo, s_hi) = self.system_window;
        let (lo, hi) = state.support_bounds();
        if lo < s_lo || hi > s_hi {
            return Err(Error::WindowOverflow { lo: s_lo, hi: s_hi, index: if lo < s_lo { lo } else { hi } });
        }
        if !(self.aux_window.0..=self.aux_window.1).contains(&0) {
            return Err(Error::WindowOverflow { lo: self.aux_window.0, hi: self.aux_window.1, index: 0 });
        }
        let mut v = CVector::zeros(self.dim());
        for s in s_lo..=s_hi {
            v[self.index(s, 0)] = state.amplitude(s);
        }
        Ok(v)
    }
}

/// Build `V` with `V(|ψ_p⟩ ⊗ |0⟩) = |φ_q⟩ ⊗ |ω_r⟩`, where `ψ_p` has zero
/// phases and `φ_q`, `ω_r` carry the given phases (indexed like the weights of
/// `q` and `r`). Windows are sized to hold every support.
pub fn build_cwp_unitary(
    p: &EnergyDistribution,
    q: &EnergyDistribution,
    r: &EnergyDistribution,
    phases_q: Option<&[f64]>,
    phases_r: Option<&[f64]>,
) -> Result<EnergyConservingUnitary> {
    let (p_lo, p_hi) = p.support_bounds();
    let (q_lo, q_hi) = q.support_bounds();
    let (r_lo, r_hi) = r.support_bounds();
    let system = (p_lo.min(q_lo), p_hi.max(q_hi));
    let aux = (r_lo.min(0), r_hi.max(0));
    build_cwp_unitary_in(p, q, r, phases_q, phases_r, system, aux)
}

/// As [`build_cwp_unitary`] on explicit inclusive windows.
pub fn build_cwp_unitary_in(
    p: &EnergyDistribution,
    q: &EnergyDistribution,
    r: &EnergyDistribution,
    phases_q: Option<&[f64]>,
    phases_r: Option<&[f64]>,
    system_window: (i64, i64),
    aux_window: (i64, i64),
) -> Result<EnergyConservingUnitary> {
    let mismatch = convolve(q, r).sup_distance(p);
    if mismatch > CONVOLUTION_TOL {
        return Err(Error::ConvolutionMismatch { residual: mismatch });
    }
    for (name, d, ph) in [("q", q, phases_q), ("r", r, phases_r)] {
        if let Some(ph) = ph {
            if ph.len() != d.len() {
                return Err(Error::InvalidDistribution(format!(
                    "{name} has {} weights but {} phases",
                    d.len(),
                    ph.len()
                )));
            }
        }
    }
    let fits = |d: &EnergyDistribution, (lo, hi): (i64, i64)| -> Result<()> {
        let (a, b) = d.support_bounds();
        if a < lo || b > hi {
            return Err(Error::WindowOverflow { lo, hi, index: if a < lo { a } else { b } });
        }
        Ok(())
    };
    fits(p, system_window)?;
    fits(q, system_window)?;
    fits(r, aux_window)?;
    if !(aux_window.0..=aux_window.1).contains(&0) {
        return Err(Error::WindowOverflow { lo: aux_window.0, hi: aux_window.1, index: 0 });
    }
    let phase = |d: &EnergyDistribution, ph: Option<&[f64]>, n: i64| -> f64 {
        let k = n - d.offset();
        match ph {
            Some(ph) if k >= 0 && (k as usize) < ph.len() => ph[k as usize],
            _ => 0.0,
        }
    };

    Ok(EnergyConservingUnitary::from_block_fn(system_window, aux_window, |energy, basis| {
        let dim = basis.len();
        let slot = basis.iter().position(|&(_, a)| a == 0);
        let Some(slot) = slot.filter(|_| p.weight(energy) > 0.0) else {
            return CMatrix::identity(dim, dim);
        };
        let mut column = CVector::zeros(dim);
        for (i, &(s, a)) in basis.iter().enumerate() {
            let w = q.weight(s) * r.weight(a);
            if w > 0.0 {
                column[i] = C64::from_polar(w.sqrt(), phase(q, phases_q, s) + phase(r, phases_r, a));
            }
        }
        let norm = column.norm();
        if norm == 0.0 {
            return CMatrix::identity(dim, dim);
        }
        complete_to_unitary(&column.unscale(norm), slot)
    }))
}

/// Outcome of running a process on an input state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherentWorkRecord {
    pub input: LadderState,
    pub output: LadderState,
    pub work_state: LadderState,
    pub reversible: bool,
    /// `σ₁²` of the output amplitude matrix.
    pub product_fidelity: f64,
    pub unitary: EnergyConservingUnitary,
}

/// Compute `V(input ⊗ |0⟩)` and factor it into `output ⊗ work_state`.
pub fn apply_cwp(v: &EnergyConservingUnitary, input: &LadderState) -> Result<CoherentWorkRecord> {
    let joint = v.apply(&v.embed_input(input)?);
    let (ds, da) = (v.dim_system(), v.dim_aux());
    let m = CMatrix::from_fn(ds, da, |i, j| joint[i * da + j]);
    let (sigma, u, w) = dominant_singular_pair(&m);
    let fidelity = sigma * sigma;
    if fidelity < 1.0 - PROCESS_TOL {
        return Err(Error::NotAProcess { fidelity });
    }
    // M ≈ σ u w†, so the work amplitudes are conj(w). Fix the global phase so
    // the largest work amplitude is real positive.
    let mut work: Vec<C64> = w.iter().map(|z| z.conj()).collect();
    let mut out: Vec<C64> = u.iter().copied().collect();
    let (_, lead) = work
        .iter()
        .enumerate()
        .fold((0.0, ONE), |(best, z), (_, &x)| if x.norm() > best { (x.norm(), x) } else { (best, z) });
    let rot = if lead.norm() > 0.0 { lead.conj() / lead.norm() } else { ONE };
    work.iter_mut().for_each(|x| *x *= rot);
    out.iter_mut().for_each(|x| *x /= rot);
    // Roundoff on empty levels would otherwise be amplified by e^{−βE}.
    for x in work.iter_mut().chain(out.iter_mut()) {
        if x.norm_sqr() < crate::ladder::WEIGHT_FLOOR {
            *x = ZERO;
        }
    }
    let output = LadderState::normalized(EnergySpectrum::ladder(v.system_window.0, ds), out)?;
    let work_state = LadderState::normalized(EnergySpectrum::ladder(v.aux_window.0, da), work)?;
    let mut record = CoherentWorkRecord {
        input: input.clone(),
        output,
        work_state,
        reversible: false,
        product_fidelity: fidelity,
        unitary: v.clone(),
    };
    record.reversible = is_reversible(&record);
    Ok(record)
}

/// The unique `r ≥ 0` with `p_input = p_output ⊛ r`.
pub fn infer_work_distribution(input: &LadderState, output: &LadderState) -> Result<EnergyDistribution> {
    let p = input.energy_distribution().trimmed();
    let q = output.energy_distribution().trimmed();
    if q.len() > p.len() {
        return Err(Error::NoValidProcess { residual: f64::INFINITY });
    }
    let b = p.len() - q.len() + 1;
    let n = p.len();
    let qw = q.weights();
    let a = DMatrix::from_fn(n, b, |i, j| if i >= j && i - j < qw.len() { qw[i - j] } else { 0.0 });
    let target = nalgebra::DVector::from_column_slice(p.weights());
    let r = nnls(&a, &target);
    let residual = (&a * &r - &target).amax();
    if residual > INFER_TOL {
        return Err(Error::NoValidProcess { residual });
    }
    EnergyDistribution::from_unnormalized(p.offset() - q.offset(), r.iter().copied().collect())
        .map(|d| d.trimmed())
        .map_err(|_| Error::NoValidProcess { residual })
}

/// True iff the work distribution is a point mass.
pub fn is_reversible(record: &CoherentWorkRecord) -> bool {
    record.work_state.energy_distribution().max_weight() >= 1.0 - TRIVIALITY_TOL
}

/// Variance of the work energy; zero within `1e-12` exactly when reversible.
pub fn work_variance(record: &CoherentWorkRecord) -> f64 {
    record.work_state.energy_distribution().variance()
}

/// `Σ p_n e^{int}`.
pub fn characteristic_function(d: &EnergyDistribution, t: f64) -> C64 {
    d.support().map(|(n, w)| C64::from_polar(w, n as f64 * t)).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisorderCheck {
    pub f_in: f64,
    pub f_out: f64,
    pub f_work: f64,
    pub holds: bool,
}

/// `max(f_out, f_work) ≤ f_in + 1e-12`.
pub fn disorder_monotone_check(record: &CoherentWorkRecord, functional: DisorderFunctional) -> Result<DisorderCheck> {
    let f_in = disorder(&record.input.energy_distribution(), functional)?;
    let f_out = disorder(&record.output.energy_distribution(), functional)?;
    let f_work = disorder(&record.work_state.energy_distribution(), functional)?;
    Ok(DisorderCheck { f_in, f_out, f_work, holds: f_out.max(f_work) <= f_in + 1e-12 })
}

/// Run a process on a two-mode beam splitter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeamSplitterReport {
    pub record: CoherentWorkRecord,
    /// Coherent amplitude expected on the system mode.
    pub output_alpha: C64,
    /// Coherent amplitude expected on the auxiliary mode.
    pub work_alpha: C64,
    pub output_fidelity: f64,
    pub work_fidelity: f64,
    /// `| |α|² − |α cosθ|² − |α sinθ|² |` from the measured mean photon numbers.
    pub intensity_gap: f64,
}

/// `exp[θ(a b† − a† b)]` on two modes truncated to `truncation` levels,
/// applied to `|α⟩ ⊗ |0⟩`.
///
/// Total photon number is conserved, so each block `N < truncation` is the
/// full `(N + 1)`-dimensional space and is exponentiated exactly. Blocks at
/// larger `N` are cut by the truncation and set to identity; the input never
/// reaches them.
pub fn beam_splitter_process(alpha: C64, theta: f64, truncation: usize) -> Result<BeamSplitterReport> {
    let amps = coherent_amplitudes(alpha, truncation, None)?;
    let input = LadderState::normalized(EnergySpectrum::ladder(0, truncation), amps)?;
    let top = truncation as i64 - 1;
    let v = EnergyConservingUnitary::from_block_fn((0, top), (0, top), |energy, basis| {
        let dim = basis.len();
        if energy > top {
            return CMatrix::identity(dim, dim);
        }
        // basis[i] = (i, N − i): a b† lowers s, a† b raises it.
        let mut k = CMatrix::zeros(dim, dim);
        for (i, &(s, a)) in basis.iter().enumerate() {
            if s > 0 {
                let amp = theta * ((s as f64) * (a as f64 + 1.0)).sqrt();
                // G|s,a⟩ ∋ +amp|s−1,a+1⟩, and G is real antisymmetric.
                let j = i - 1;
                k[(j, i)] += C64::new(0.0, amp);
                k[(i, j)] += C64::new(0.0, -amp);
            }
        }
        // K = iG is Hermitian and exp(−iK) = exp(G).
        hermitian_propagator(&k, 1.0)
    });
    let record = apply_cwp(&v, &input)?;
    let output_alpha = alpha * theta.cos();
    let work_alpha = alpha * theta.sin();
    let expected_out = LadderState::normalized(
        EnergySpectrum::ladder(0, truncation),
        coherent_amplitudes(output_alpha, truncation, None)?,
    )?;
    let expected_work = LadderState::normalized(
        EnergySpectrum::ladder(0, truncation),
        coherent_amplitudes(work_alpha, truncation, None)?,
    )?;
    let mean_out = record.output.energy_distribution().mean();
    let mean_work = record.work_state.energy_distribution().mean();
    let intensity_gap = (alpha.norm_sqr() - mean_out - mean_work).abs();
    Ok(BeamSplitterReport {
        output_fidelity: record.output.fidelity(&expected_out),
        work_fidelity: record.work_state.fidelity(&expected_work),
        record,
        output_alpha,
        work_alpha,
        intensity_gap,
    })
}
