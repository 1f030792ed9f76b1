//! Decomposability of energy distributions by discrete deconvolution, the
//! Poisson (Raikov) splitting rule and canonical forms of shifted coherent
//! states.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ladder::{convolve, poisson_pmf, EnergyDistribution, LadderState};
use crate::nnls::nnls;

/// A factor counts as constant when its largest weight reaches `1 − TRIVIALITY_TOL`.
pub const TRIVIALITY_TOL: f64 = 1e-9;

/// Moment-matching tolerance for the Poisson membership test.
pub const MOMENT_TOL: f64 = 1e-6;

/// Pointwise pmf fit tolerance for the Poisson membership test.
pub const POISSON_FIT_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeconvolveOptions {
    /// Acceptance threshold on `‖p − q ⊛ r‖_sup`.
    pub tol: f64,
    /// Support extents up to this value get the full restart budget.
    pub exhaustive_cap: usize,
    /// Larger supports are refused.
    pub hard_cap: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for DeconvolveOptions {
    fn default() -> Self {
        Self { tol: 1e-8, exhaustive_cap: 16, hard_cap: 64, restarts: 20, seed: 0x5eed }
    }
}

impl DeconvolveOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorPair {
    pub q: EnergyDistribution,
    pub r: EnergyDistribution,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeconvolutionResult {
    /// Non-trivial factorizations, sorted by (support size of r, residual).
    pub factors: Vec<FactorPair>,
    /// Best residual over all attempts, accepted or not.
    pub residual: f64,
    pub exhaustive: bool,
    pub support_extent: usize,
    pub tolerance: f64,
}

/// Search for non-trivial `q, r ≥ 0` with `q ⊛ r = p`.
///
/// Factors use canonical shifts: `q` starts at the lowest support index of
/// `p` and `r` starts at 0. Every split of the support extent `N` into
/// `a + b = N + 1` with `a, b ≥ 2` is fitted by alternating nonnegative least
/// squares from seeded random starts, followed by a damped Gauss-Newton
/// polish on the positive entries.
pub fn deconvolve(p: &EnergyDistribution, opts: &DeconvolveOptions) -> Result<DeconvolutionResult> {
    let p = p.trimmed();
    let n = p.len();
    if n > opts.hard_cap {
        return Err(Error::SupportTooLarge { size: n, cap: opts.hard_cap });
    }
    let exhaustive = n <= opts.exhaustive_cap;
    let mut result = DeconvolutionResult {
        factors: Vec::new(),
        residual: f64::INFINITY,
        exhaustive,
        support_extent: n,
        tolerance: opts.tol,
    };
    if n < 3 {
        // Extent 1 is a point mass; extent 2 would need two factors of extent 1.
        result.exhaustive = true;
        return Ok(result);
    }
    let restarts = if exhaustive { opts.restarts } else { opts.restarts.min(3) };
    let target = DVector::from_column_slice(p.weights());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    for a in 2..n {
        let b = n + 1 - a;
        for _ in 0..restarts {
            let q0: Vec<f64> = (0..a).map(|_| rng.random_range(0.05..1.0)).collect();
            let (q, r) = anls(&target, q0, b);
            let (q, r) = polish(&target, q, r);
            let Some(pair) = to_pair(&p, &q, &r) else { continue };
            result.residual = result.residual.min(pair.residual);
            if pair.residual <= opts.tol
                && pair.q.max_weight() <= 1.0 - TRIVIALITY_TOL
                && pair.r.max_weight() <= 1.0 - TRIVIALITY_TOL
                && !result.factors.iter().any(|f| same_pair(f, &pair))
            {
                result.factors.push(pair);
            }
        }
    }
    result.factors.sort_by(|x, y| {
        support_size(&x.r).cmp(&support_size(&y.r)).then(x.residual.total_cmp(&y.residual))
    });
    Ok(result)
}

/// True iff [`deconvolve`] with default options finds a factor pair.
pub fn is_decomposable(p: &EnergyDistribution) -> Result<bool> {
    Ok(!deconvolve(p, &DeconvolveOptions::default())?.factors.is_empty())
}

fn support_size(d: &EnergyDistribution) -> usize {
    d.support().count()
}

fn same_pair(x: &FactorPair, y: &FactorPair) -> bool {
    x.q.offset() == y.q.offset()
        && x.r.offset() == y.r.offset()
        && x.q.sup_distance(&y.q) < 1e-6
        && x.r.sup_distance(&y.r) < 1e-6
}

fn to_pair(p: &EnergyDistribution, q: &[f64], r: &[f64]) -> Option<FactorPair> {
    let q = EnergyDistribution::from_unnormalized(p.offset(), q.to_vec()).ok()?;
    let r = EnergyDistribution::from_unnormalized(0, r.to_vec()).ok()?;
    let residual = convolve(&q, &r).sup_distance(p);
    Some(FactorPair { q, r, residual })
}

/// `n × len(r)` matrix `M` with `M r = q ⊛ r`.
fn conv_matrix(q: &[f64], r_len: usize) -> DMatrix<f64> {
    let n = q.len() + r_len - 1;
    DMatrix::from_fn(n, r_len, |i, j| if i >= j && i - j < q.len() { q[i - j] } else { 0.0 })
}

fn conv(q: &[f64], r: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; q.len() + r.len() - 1];
    for (i, &x) in q.iter().enumerate() {
        for (j, &y) in r.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn sup_residual(p: &DVector<f64>, q: &[f64], r: &[f64]) -> f64 {
    conv(q, r).iter().zip(p.iter()).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
}

fn anls(p: &DVector<f64>, mut q: Vec<f64>, b: usize) -> (Vec<f64>, Vec<f64>) {
    let mut r: Vec<f64> = nnls(&conv_matrix(&q, b), p).iter().copied().collect();
    let mut best = f64::INFINITY;
    let mut stall = 0;
    for _ in 0..400 {
        q = nnls(&conv_matrix(&r, q.len()), p).iter().copied().collect();
        r = nnls(&conv_matrix(&q, b), p).iter().copied().collect();
        let res = sup_residual(p, &q, &r);
        if res <= 1e-12 {
            break;
        }
        if res < best * (1.0 - 1e-4) {
            best = res;
            stall = 0;
        } else {
            stall += 1;
            if stall > 25 {
                break;
            }
        }
    }
    rescale(&mut q, &mut r);
    (q, r)
}

fn rescale(q: &mut [f64], r: &mut [f64]) {
    let s: f64 = q.iter().sum();
    if s > 0.0 {
        q.iter_mut().for_each(|x| *x /= s);
        r.iter_mut().for_each(|x| *x *= s);
    }
}

/// Damped Gauss-Newton on the positive entries of `(q, r)` with the gauge
/// `Σq = 1` appended as an extra residual row.
fn polish(p: &DVector<f64>, mut q: Vec<f64>, mut r: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    if q.iter().chain(&r).any(|x| !x.is_finite()) || sup_residual(p, &q, &r) > 1e-2 {
        return (q, r);
    }
    for _ in 0..3 {
        let qa: Vec<usize> = (0..q.len()).filter(|&i| q[i] > 0.0).collect();
        let ra: Vec<usize> = (0..r.len()).filter(|&j| r[j] > 0.0).collect();
        let nvar = qa.len() + ra.len();
        let mut mu = 1e-6;
        let cost = |q: &[f64], r: &[f64]| -> f64 {
            let c = conv(q, r);
            let g = q.iter().sum::<f64>() - 1.0;
            c.iter().zip(p.iter()).map(|(a, b)| (a - b).powi(2)).sum::<f64>() + g * g
        };
        let mut current = cost(&q, &r);
        for _ in 0..60 {
            let c = conv(&q, &r);
            let rows = p.len() + 1;
            let mut f = DVector::zeros(rows);
            for k in 0..p.len() {
                f[k] = c[k] - p[k];
            }
            f[p.len()] = q.iter().sum::<f64>() - 1.0;
            let mut jac = DMatrix::zeros(rows, nvar);
            for (col, &i) in qa.iter().enumerate() {
                for (j, &rj) in r.iter().enumerate() {
                    jac[(i + j, col)] = rj;
                }
                jac[(p.len(), col)] = 1.0;
            }
            for (col, &j) in ra.iter().enumerate() {
                for (i, &qi) in q.iter().enumerate() {
                    jac[(i + j, qa.len() + col)] = qi;
                }
            }
            let jt = jac.transpose();
            let jtj = &jt * &jac;
            let g = &jt * &f;
            let mut improved = false;
            for _ in 0..10 {
                let mut lhs = jtj.clone();
                for d in 0..nvar {
                    lhs[(d, d)] += mu * (1.0 + jtj[(d, d)]);
                }
                let Some(step) = lhs.lu().solve(&(-&g)) else { break };
                let mut q2 = q.clone();
                let mut r2 = r.clone();
                for (col, &i) in qa.iter().enumerate() {
                    q2[i] = (q[i] + step[col]).max(0.0);
                }
                for (col, &j) in ra.iter().enumerate() {
                    r2[j] = (r[j] + step[qa.len() + col]).max(0.0);
                }
                let c2 = cost(&q2, &r2);
                if c2 < current {
                    q = q2;
                    r = r2;
                    current = c2;
                    mu = (mu * 0.3).max(1e-15);
                    improved = true;
                    break;
                }
                mu *= 10.0;
            }
            if !improved || current < 1e-32 {
                break;
            }
        }
        if q.iter().chain(&r).all(|&x| x >= 0.0) {
            break;
        }
    }
    rescale(&mut q, &mut r);
    (q, r)
}

/// `Poisson(λ)` shifted by `shift`, split into `Poisson(μ)` shifted by
/// `shift1` and `Poisson(ν)` shifted by `shift − shift1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoissonDecomposition {
    pub lambda: f64,
    pub mu: f64,
    pub nu: f64,
    pub shift: i64,
    pub shift_split: (i64, i64),
}

impl PoissonDecomposition {
    /// One of the components is a point mass.
    pub fn is_trivial(&self) -> bool {
        self.mu == 0.0 || self.nu == 0.0
    }

    /// Component distributions truncated to `truncation` levels each.
    pub fn components(&self, truncation: usize) -> Result<(EnergyDistribution, EnergyDistribution)> {
        Ok((
            EnergyDistribution::poisson(self.mu, self.shift_split.0, truncation)?,
            EnergyDistribution::poisson(self.nu, self.shift_split.1, truncation)?,
        ))
    }

    /// TV distance between the convolved components and the input law, all at
    /// `truncation` levels.
    pub fn reconvolution_tv(&self, truncation: usize) -> Result<f64> {
        let (q, r) = self.components(truncation)?;
        let p = EnergyDistribution::poisson(self.lambda, self.shift, truncation)?;
        Ok(convolve(&q, &r).tv_distance(&p))
    }
}

pub fn raikov_split(lambda: f64, mu: f64, shift: i64, shift1: i64) -> Result<PoissonDecomposition> {
    if !(lambda >= 0.0) || !(mu >= 0.0) || !(mu <= lambda) || !lambda.is_finite() {
        return Err(Error::RateOutOfRange { mu, lambda });
    }
    Ok(PoissonDecomposition { lambda, mu, nu: lambda - mu, shift, shift_split: (shift1, shift - shift1) })
}

/// `|α|`, shift `k` and the phases that bring a state of the semi-classical
/// set to `|α, k⟩` with real positive `α`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub alpha_abs: f64,
    pub k: i64,
    /// One phase per level of the input window; multiplying amplitude `n` by
    /// `e^{i phases[n]}` yields the canonical state.
    pub phases: Vec<f64>,
    pub fit_residual: f64,
}

impl CanonicalForm {
    /// Apply the phase map to `state`.
    pub fn apply(&self, state: &LadderState) -> Result<LadderState> {
        state.with_phases(&self.phases)
    }
}

pub fn canonical_form(state: &LadderState) -> Result<CanonicalForm> {
    let dist = state.energy_distribution();
    let (k, hi) = dist.support_bounds();
    let shifted = dist.shifted(-k);
    let mean = shifted.mean();
    let var = shifted.variance();
    if (mean - var).abs() > MOMENT_TOL {
        return Err(Error::NotInC { residual: (mean - var).abs() });
    }
    let lambda = mean.max(0.0);
    let len = (hi - k + 1) as usize;
    let pmf = poisson_pmf(lambda, len);
    let mut residual: f64 = 0.0;
    let (lo_w, hi_w) = state.spectrum().window();
    for n in lo_w..=hi_w {
        let want = if n >= k && n <= hi { pmf[(n - k) as usize] } else { 0.0 };
        residual = residual.max((dist.weight(n) - want).abs());
    }
    if residual > POISSON_FIT_TOL {
        return Err(Error::NotInC { residual });
    }
    let phases = state.amplitudes().iter().map(|a| if a.norm() > 0.0 { -a.arg() } else { 0.0 }).collect();
    Ok(CanonicalForm { alpha_abs: lambda.sqrt(), k, phases, fit_residual: residual })
}
