//! Independent reference computations checked against the library.

mod common;

use coherent_work::cwp::{apply_cwp, build_cwp_unitary};
use coherent_work::decomposition::{deconvolve, is_decomposable, DeconvolveOptions};
use coherent_work::fluctuation::{
    complementary_channel, iid_limit_check, trajectory_probability, BathModel, ProtocolUnitary,
};
use coherent_work::ladder::{
    convolve, make_coherent_state, poisson_tail, CoherentLadderParams, DensityMatrix, EnergyDistribution,
    EnergySpectrum, LadderState,
};
use coherent_work::linalg::{CMatrix, CVector, C64};
use coherent_work::potential::{gibbs_rescale_weights, mean_coherence};
use common::*;
use nalgebra::DMatrix;
use rand::Rng;

/// Roots of `Σ c_k z^k` via the companion matrix; `c` must have nonzero ends.
fn roots(c: &[f64]) -> Vec<C64> {
    let n = c.len() - 1;
    let lead = c[n];
    let companion = DMatrix::from_fn(n, n, |i, j| {
        if i == 0 {
            -c[n - 1 - j] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    companion.complex_eigenvalues().iter().copied().collect()
}

fn poly_from_roots(rs: &[C64]) -> Vec<C64> {
    let mut c = vec![C64::new(1.0, 0.0)];
    for &r in rs {
        let mut next = vec![C64::new(0.0, 0.0); c.len() + 1];
        for (k, &a) in c.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * r;
        }
        c = next;
    }
    c
}

/// Exhaustive oracle: `p` (with `p_0 > 0`) is decomposable iff some
/// conjugation-closed root subset gives a factor `Q` such that `Q` and `P/Q`
/// both have nonnegative coefficients (up to `slack`).
fn oracle_decomposable(p: &[f64], slack: f64) -> bool {
    let rs = roots(p);
    let n = rs.len();
    if n < 2 {
        return false;
    }
    let lead = p[n];
    for mask in 1..(1u32 << n) - 1 {
        let (mut inside, mut outside) = (Vec::new(), Vec::new());
        for (i, &r) in rs.iter().enumerate() {
            if mask & (1 << i) != 0 { inside.push(r) } else { outside.push(r) }
        }
        let (q, r) = (poly_from_roots(&inside), poly_from_roots(&outside));
        let real = |c: &[C64]| c.iter().all(|z| z.im.abs() <= 1e-7);
        if !real(&q) || !real(&r) {
            continue;
        }
        // Normalize each factor to unit mass; the lead sign fixes itself.
        let qs: f64 = q.iter().map(|z| z.re).sum();
        let rsum: f64 = r.iter().map(|z| z.re).sum();
        let ok = |c: &[C64], s: f64| c.iter().all(|z| z.re / s >= -slack);
        if qs.abs() > 0.0 && rsum.abs() > 0.0 && ok(&q, qs) && ok(&r, rsum) && lead != 0.0 {
            return true;
        }
    }
    false
}

#[test]
fn decomposition_agrees_with_root_oracle() {
    let mut rng = rng(101);
    let mut decomposable_seen = 0;
    let mut indecomposable_seen = 0;
    for trial in 0..120 {
        let n = rng.random_range(3..=8);
        let p = if trial % 2 == 0 {
            let a = rng.random_range(2..n);
            let q = random_distribution(&mut rng, 0, a);
            let r = random_distribution(&mut rng, 0, n + 1 - a);
            convolve(&q, &r)
        } else {
            random_distribution(&mut rng, 0, n)
        };
        let w = p.weights();
        // Skip cases that sit on the boundary of the oracle's slack.
        let strict = oracle_decomposable(w, -1e-6);
        let loose = oracle_decomposable(w, 1e-6);
        if strict != loose {
            continue;
        }
        let found = is_decomposable(&p).unwrap();
        assert_eq!(found, loose, "trial {trial}: {w:?}");
        if loose { decomposable_seen += 1 } else { indecomposable_seen += 1 }
    }
    assert!(decomposable_seen >= 40 && indecomposable_seen >= 20, "{decomposable_seen} / {indecomposable_seen}");
}

#[test]
fn decomposition_examples_from_roots() {
    // (1 + z + z²)/3 has complex roots only; it cannot split.
    assert!(!oracle_decomposable(&[1.0, 1.0, 1.0], 1e-9));
    assert!(!is_decomposable(&EnergyDistribution::uniform(&[0, 1, 2]).unwrap()).unwrap());
    // (1 + z)(1 + z²)/4.
    assert!(oracle_decomposable(&[0.25; 4], 1e-9));
    let r = deconvolve(&EnergyDistribution::uniform(&[0, 1, 2, 3]).unwrap(), &DeconvolveOptions::default()).unwrap();
    assert_eq!(r.factors.len(), 2);
}

#[test]
fn coherent_state_weights_are_poisson() {
    for &a in &[0.0, 0.5, 1.0, 2.0] {
        let psi = make_coherent_state(&CoherentLadderParams::new(C64::new(a, 0.0), 2, 40)).unwrap();
        let lam = a * a;
        let mut term = f64::exp(-lam);
        for n in 0..40 {
            if n > 0 {
                term *= lam / n as f64;
            }
            assert!((psi.energy_distribution().weight(n + 2) - term).abs() < 1e-12);
        }
    }
}

#[test]
fn poisson_tail_matches_direct_sum() {
    for &(lam, len) in &[(1.0, 10usize), (2.5, 20), (4.0, 40)] {
        let mut term = f64::exp(-lam);
        let mut head = 0.0;
        for n in 0..len {
            if n > 0 {
                term *= lam / n as f64;
            }
            head += term;
        }
        let direct = 1.0 - head;
        let t = poisson_tail(lam, len);
        assert!((t - direct).abs() <= 1e-14 + 1e-9 * direct.abs(), "{lam} {len}: {t} vs {direct}");
    }
}

#[test]
fn cwp_columns_match_formula() {
    let mut rng = rng(102);
    for _ in 0..30 {
        let (nq, nr) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let q = random_distribution(&mut rng, 1, nq);
        let r = random_distribution(&mut rng, -2, nr);
        let p = convolve(&q, &r);
        let ph_q: Vec<f64> = (0..q.len()).map(|_| rng.random_range(0.0..6.0)).collect();
        let ph_r: Vec<f64> = (0..r.len()).map(|_| rng.random_range(0.0..6.0)).collect();
        let v = build_cwp_unitary(&p, &q, &r, Some(&ph_q), Some(&ph_r)).unwrap();
        let input = LadderState::from_distribution(&p, None).unwrap();
        let out = v.apply(&v.embed_input(&input).unwrap());
        let da = v.dim_aux();
        for i in 0..v.dim_system() {
            for j in 0..da {
                let (s, a) = (v.system_window.0 + i as i64, v.aux_window.0 + j as i64);
                let (qs, ra) = (q.weight(s), r.weight(a));
                let phase = if qs > 0.0 && ra > 0.0 { ph_q[(s - q.offset()) as usize] + ph_r[(a - r.offset()) as usize] } else { 0.0 };
                let expected = C64::from_polar((qs * ra).sqrt(), phase);
                assert!((out[i * da + j] - expected).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn rescaled_state_is_reweighted_distribution() {
    let mut rng = rng(103);
    for _ in 0..50 {
        let d = rng.random_range(2..=6);
        let lv = levels(&mut rng, d, false, 0.0, 3.0);
        let psi = random_state(&mut rng, spectrum(lv.clone()));
        let beta = rng.random_range(0.1..4.0);
        let stats = psi.energy_statistics();
        let tilde = gibbs_rescale_weights(&stats, beta).unwrap().state;
        let z: f64 = stats.weights().iter().zip(&lv).map(|(w, e)| w * (-beta * e).exp()).sum();
        for ((w, e), t) in stats.weights().iter().zip(&lv).zip(tilde.weights()) {
            assert!((t - w * (-beta * e).exp() / z).abs() < 1e-14);
        }
        // The reported beta_m solves 4π κ₂(p̃ at β_m) = χ_m.
        let m = mean_coherence(&stats, beta).unwrap();
        let at = gibbs_rescale_weights(&stats, m.beta_m).unwrap().state;
        let lhs = 4.0 * std::f64::consts::PI * at.variance();
        assert!((lhs - m.chi_m).abs() <= 1e-8 * (1.0 + m.chi_m), "{lhs} vs {}", m.chi_m);
        assert!((0.0..=beta).contains(&m.beta_m));
    }
}

/// Permutation of composite basis vectors within energy eigenspaces.
fn permutation_protocol(energies: Vec<f64>, perm: &[usize]) -> ProtocolUnitary {
    let n = energies.len();
    let m = CMatrix::from_fn(n, n, |i, j| if perm[j] == i { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
    ProtocolUnitary::from_matrix(energies, m).unwrap()
}

#[test]
fn permutation_trajectories_are_indicators() {
    // System levels {0, 1}, bath levels {0, 1}: composite energies 0, 1, 1, 2.
    let energies = vec![0.0, 1.0, 1.0, 2.0];
    let swap = permutation_protocol(energies.clone(), &[0, 2, 1, 3]);
    let proj = |k: usize| {
        let d = CVector::from_fn(4, |i, _| if i == k { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
        CMatrix::from_diagonal(&d)
    };
    for from in 0..4 {
        for to in 0..4 {
            let p = trajectory_probability(&proj(to), &proj(from), &swap, 0.7).unwrap();
            let expected = if [0, 2, 1, 3][from] == to { 1.0 } else { 0.0 };
            assert!((p - expected).abs() < 1e-14);
        }
    }
    // Identity protocol, orthogonal constraint: zero.
    let id = ProtocolUnitary::identity(energies);
    assert!(trajectory_probability(&proj(1), &proj(2), &id, 1.0).unwrap().abs() < 1e-15);
}

#[test]
fn permutation_channel_is_classical_pushforward() {
    let bath = BathModel::new(spectrum(vec![0.0, 1.0]), spectrum(vec![0.0]));
    let system = [0.0, 1.0];
    let energies: Vec<f64> = system.iter().flat_map(|s| bath.energies().into_iter().map(move |b| s + b)).collect();
    // Basis (s, b) with b in {0, 1 (block 0), 0 (block 1)}: swap (0,1) <-> (1,0).
    let v = permutation_protocol(energies, &[0, 3, 2, 1, 4, 5]);
    let beta = 0.9;
    let rho = DensityMatrix::diagonal(system.to_vec(), &[0.3, 0.7]).unwrap();
    let g0 = bath.gibbs_state(0, beta).unwrap();
    let out = complementary_channel(&v, &rho, &g0).unwrap();
    let g = g0.matrix();
    let (g00, g11) = (g[(0, 0)].re, g[(1, 1)].re);
    // The swap exchanges system and bath qubit, so the bath inherits (0.3, 0.7).
    let (b0, b1) = (0.3 * (g00 + g11), 0.7 * (g00 + g11));
    assert!((out.matrix()[(0, 0)].re - b0).abs() < 1e-14);
    assert!((out.matrix()[(1, 1)].re - b1).abs() < 1e-14);
    assert!(out.matrix()[(2, 2)].re.abs() < 1e-14);
}

#[test]
fn binomial_states_are_nearly_gaussian() {
    // Many fair two-level copies: the third cumulant vanishes.
    let psi = LadderState::from_distribution(&EnergyDistribution::new(0, vec![0.5, 0.5]).unwrap(), None).unwrap();
    let phi = LadderState::eigenstate(0);
    let r = iid_limit_check(&psi, &phi, &[16], 1.0, 1.0).unwrap();
    assert!(r.rows[0].deviation <= 1e-3, "{:?}", r.rows[0]);
}

#[test]
fn process_output_is_product_of_requested_factors() {
    let p = EnergyDistribution::uniform(&[0, 1, 2, 3]).unwrap();
    let q = EnergyDistribution::uniform(&[5, 6]).unwrap();
    let r = EnergyDistribution::uniform(&[-5, -3]).unwrap();
    let v = build_cwp_unitary(&p, &q, &r, None, None).unwrap();
    let rec = apply_cwp(&v, &LadderState::from_distribution(&p, None).unwrap()).unwrap();
    let spec = EnergySpectrum::ladder(5, 2);
    let expected = LadderState::from_distribution_on(spec, &q, None).unwrap();
    assert!(rec.output.fidelity(&expected) > 1.0 - 1e-12);
}
