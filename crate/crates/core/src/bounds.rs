//! Closed-form success-probability bounds under an energy restriction, their
//! inverses, the critical visibility, and the product maximization over
//! group energies for partially separable preparations.
//!
//! The energy of a preparation is its non-vacuum weight `Tr[H rho]` with
//! `H = 1 - |0...0><0...0|`. Every bound is a function of that budget
//! `omega` and of the number of parties (or states).

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::error::{check_unit, Error, Result};
use crate::partition::{check_cap, integer_partitions, PartitionSpec};

/// An energy budget `omega` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EnergyBound(f64);

impl EnergyBound {
    pub fn new(omega: f64) -> Result<Self> {
        check_unit("omega", omega)?;
        Ok(Self(omega))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Energy above which `n_states` states become perfectly distinguishable.
pub fn saturation_energy(n_states: f64) -> f64 {
    1.0 - 1.0 / n_states
}

// unchecked single-shot discrimination bound for `n_states` states
#[inline]
pub(crate) fn sd_bound(omega: f64, n_states: f64) -> f64 {
    if omega >= saturation_energy(n_states) {
        return 1.0;
    }
    let s = (omega * (n_states - 1.0)).sqrt() + (1.0 - omega).sqrt();
    (s * s / n_states).min(1.0)
}

#[inline]
fn states_for(n_parties: usize) -> f64 {
    2f64.powi(n_parties as i32)
}

/// Maximum probability of identifying one of `n_states` equiprobable states
/// whose energy is at most `omega`.
pub fn p_sd(omega: f64, n_states: usize) -> Result<f64> {
    check_unit("omega", omega)?;
    if n_states < 2 {
        return Err(Error::OutOfRange {
            name: "n_states",
            value: n_states as f64,
            range: "[2, inf)".into(),
        });
    }
    Ok(sd_bound(omega, n_states as f64))
}

/// Bound for arbitrary (entangled) preparations over `n_parties` parties,
/// i.e. the discrimination bound for `2^n` states.
pub fn p_ent(omega: f64, n_parties: usize) -> Result<f64> {
    check_unit("omega", omega)?;
    check_parties(n_parties)?;
    Ok(sd_bound(omega, states_for(n_parties)))
}

/// Bound for fully separable preparations: the vacuum weight is shared
/// equally, each party plays a two-state game with energy
/// `1 - (1 - omega)^(1/n)`.
pub fn p_sep(omega: f64, n_parties: usize) -> Result<f64> {
    check_unit("omega", omega)?;
    check_parties(n_parties)?;
    Ok(sep_bound(omega, n_parties))
}

pub(crate) fn sep_bound(omega: f64, n_parties: usize) -> f64 {
    if omega >= saturation_energy(states_for(n_parties)) {
        return 1.0;
    }
    let local = -((-omega).ln_1p() / n_parties as f64).exp_m1();
    let factor = 0.5 + ((1.0 - local) * local).sqrt();
    factor.powi(n_parties as i32).min(1.0)
}

fn check_parties(n_parties: usize) -> Result<()> {
    if n_parties == 0 || n_parties > 1000 {
        return Err(Error::OutOfRange {
            name: "n_parties",
            value: n_parties as f64,
            range: "[1, 1000]".into(),
        });
    }
    Ok(())
}

/// The two energies at which the discrimination bound for `n_states` states
/// equals `p_s`:
///
/// `omega = [1 + (n - 2) p_s -/+ 2 sqrt(p_s (1 - p_s) (n - 1))] / n`.
///
/// The lower root inverts [`p_sd`] on `[0, 1 - 1/n]`; the upper root belongs
/// to the decreasing branch of the unclamped curve and is exposed for the
/// mixture envelope only. Certification uses the lower root.
///
/// Note: the coefficient in front of the square root is `2 sqrt(.)`, the
/// exact algebraic inverse. The variant `sqrt(2 p (1 - p) (n - 1))` found in
/// some write-ups agrees only where the discriminant vanishes and breaks the
/// round trip `g_minus(p_sd(omega)) = omega`.
pub fn g_bounds(p_s: f64, n_states: usize) -> Result<(f64, f64)> {
    if n_states < 2 {
        return Err(Error::OutOfRange {
            name: "n_states",
            value: n_states as f64,
            range: "[2, inf)".into(),
        });
    }
    let n = n_states as f64;
    let lo = 1.0 / n;
    // tolerate rounding of p_sd(0, n) = 1/n
    if !(p_s >= lo - 1e-15 && p_s <= 1.0) {
        return Err(Error::OutOfRange {
            name: "p_s",
            value: p_s,
            range: format!("[{lo}, 1]"),
        });
    }
    let p = p_s.max(lo);
    let centre = 1.0 + (n - 2.0) * p;
    let spread = 2.0 * (p * (1.0 - p) * (n - 1.0)).sqrt();
    Ok(((centre - spread) / n, (centre + spread) / n))
}

/// Visibility at which white noise brings the optimal entangled strategy
/// down to the fully separable bound.
pub fn nu_crit(omega: f64, n_parties: usize) -> Result<f64> {
    check_parties(n_parties)?;
    let guess = 1.0 / states_for(n_parties);
    let sat = saturation_energy(states_for(n_parties));
    if !(omega > 0.0 && omega < sat) {
        return Err(Error::OutOfRange {
            name: "omega",
            value: omega,
            range: format!("(0, {sat})"),
        });
    }
    let num = sep_bound(omega, n_parties) - guess;
    let den = sd_bound(omega, states_for(n_parties)) - guess;
    Ok(num / den)
}

/// Outcome of the group-energy maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionBoundResult {
    pub value: f64,
    /// `omega_j` per group, in `PartitionSpec` group order.
    pub energies: Vec<f64>,
    /// Whether every restart ended within `1e-9` of the best value.
    pub restarts_agree: bool,
}

pub const DEFAULT_SEED: u64 = 0x5eed_0f_de97;
const AGREE_TOL: f64 = 1e-9;
// the slope diverges at t = 0; capping keeps a zero coordinate from freezing
// the step size. The cap scales like the slope at the balanced point ~ 1/sqrt(T).
const SLOPE_CAP: f64 = 1e3;

/// Projected gradient ascent over log-domain group energies.
///
/// With `t_j = -ln(1 - omega_j)` the energy constraint becomes the scaled
/// simplex `sum t_j = -ln(1 - omega)`, `t_j >= 0`, and the objective is
/// `sum_j ln p_ent(1 - e^{-t_j}, k_j)`.
#[derive(Debug, Clone)]
pub struct PartitionOptimizer {
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for PartitionOptimizer {
    fn default() -> Self {
        Self {
            restarts: 16,
            max_iters: 10_000,
            tol: 1e-10,
            seed: DEFAULT_SEED,
        }
    }
}

#[inline]
fn group_log_value(t: f64, k: usize) -> f64 {
    sd_bound(-(-t).exp_m1(), states_for(k)).ln()
}

// d/dt ln p_ent(1 - e^{-t}, k)
#[inline]
fn group_log_slope(t: f64, k: usize) -> f64 {
    let big_k = states_for(k);
    let w = (-(-t).exp_m1()).max(1e-300);
    if w >= saturation_energy(big_k) {
        return 0.0;
    }
    let u = (-t).exp();
    let a = (big_k - 1.0).sqrt();
    let (sw, su) = (w.sqrt(), u.sqrt());
    su * (a * su / sw - 1.0) / (a * sw + su)
}

fn objective(ks: &[usize], t: &[f64]) -> f64 {
    ks.iter().zip(t).map(|(&k, &tj)| group_log_value(tj, k)).sum()
}

/// Euclidean projection onto `{x >= 0, sum x = total}`.
pub(crate) fn project_simplex(v: &[f64], total: f64) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        cumsum += ui;
        let candidate = (cumsum - total) / (i as f64 + 1.0);
        if ui - candidate > 0.0 {
            theta = candidate;
        }
    }
    let mut out: Vec<f64> = v.iter().map(|&x| (x - theta).max(0.0)).collect();
    // undo cancellation in theta when |v| >> total
    let sum: f64 = out.iter().sum();
    if sum > 0.0 {
        out.iter_mut().for_each(|x| *x *= total / sum);
    }
    out
}

impl PartitionOptimizer {
    pub fn maximize(&self, omega: f64, spec: &PartitionSpec) -> Result<PartitionBoundResult> {
        check_unit("omega", omega)?;
        let ks = spec.group_sizes();
        let n = spec.n();
        if omega == 1.0 {
            return Ok(PartitionBoundResult {
                value: 1.0,
                energies: vec![1.0; ks.len()],
                restarts_agree: true,
            });
        }
        let total = -(-omega).ln_1p();
        let proportional: Vec<f64> = ks.iter().map(|&k| total * k as f64 / n as f64).collect();
        let to_energies = |t: &[f64]| t.iter().map(|&tj| -(-tj).exp_m1()).collect::<Vec<_>>();

        // one group, zero budget, or enough budget to saturate every group
        if ks.len() == 1 || omega == 0.0 || total >= n as f64 * std::f64::consts::LN_2 {
            let value = ks
                .iter()
                .zip(&proportional)
                .map(|(&k, &t)| sd_bound(-(-t).exp_m1(), states_for(k)))
                .product();
            return Ok(PartitionBoundResult {
                value,
                energies: to_energies(&proportional),
                restarts_agree: true,
            });
        }

        let runs: Vec<(f64, Vec<f64>)> = (0..self.restarts.max(1))
            .map(|r| {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(r as u64);
                let raw: Vec<f64> = ks.iter().map(|_| rng.sample::<f64, _>(Exp1)).collect();
                let sum: f64 = raw.iter().sum();
                let start: Vec<f64> = raw.iter().map(|x| total * x / sum).collect();
                self.ascend(ks, total, start)
            })
            .collect();
        let (best_f, best_t) = runs
            .iter()
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .cloned()
            .expect("at least one restart");
        let value = best_f.exp();
        let restarts_agree = runs.iter().all(|(f, _)| value - f.exp() <= AGREE_TOL);
        Ok(PartitionBoundResult {
            value,
            energies: to_energies(&best_t),
            restarts_agree,
        })
    }

    fn ascend(&self, ks: &[usize], total: f64, mut t: Vec<f64>) -> (f64, Vec<f64>) {
        let cap = SLOPE_CAP / total.sqrt().min(1.0);
        let tol = self.tol * total.min(1.0);
        let mut f = objective(ks, &t);
        let mut step: f64 = 1.0;
        for _ in 0..self.max_iters {
            let grad: Vec<f64> = ks
                .iter()
                .zip(&t)
                .map(|(&k, &tj)| group_log_slope(tj, k).min(cap))
                .collect();
            // moves much longer than the budget only land on a vertex
            let g_max = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
            if g_max > 0.0 {
                step = step.min(10.0 * total / g_max);
            }
            let mut accepted = None;
            for _ in 0..80 {
                let moved: Vec<f64> = t.iter().zip(&grad).map(|(x, g)| x + step * g).collect();
                let cand = project_simplex(&moved, total);
                let dir: Vec<f64> = cand.iter().zip(&t).map(|(c, x)| c - x).collect();
                let ascent: f64 = dir.iter().zip(&grad).map(|(d, g)| d * g).sum();
                let fc = objective(ks, &cand);
                if fc >= f + 1e-4 * ascent && fc >= f {
                    accepted = Some((cand, fc, dir));
                    break;
                }
                step *= 0.5;
            }
            let Some((cand, fc, dir)) = accepted else {
                break;
            };
            t = cand;
            f = fc;
            let moved: f64 = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
            if moved <= tol {
                break;
            }
            step = (step * 2.0).min(1e6);
        }
        (f, t)
    }
}

/// Maximum of `prod_j p_ent(omega_j, k_j)` over group energies with
/// `prod_j (1 - omega_j) = 1 - omega`.
pub fn partition_bound(omega: f64, spec: &PartitionSpec) -> Result<PartitionBoundResult> {
    PartitionOptimizer::default().maximize(omega, spec)
}

/// Equal-size groups share the vacuum weight equally:
/// `omega_j = 1 - (1 - omega)^(k/n)` for every group.
pub fn equal_group_energy(omega: f64, k: usize, n: usize) -> f64 {
    1.0 - (1.0 - omega).powf(k as f64 / n as f64)
}

/// Bounds for every integer partition of `n`, in reverse lexicographic
/// order (`{n}` first).
pub fn all_partition_bounds(omega: f64, n: usize) -> Result<Vec<(PartitionSpec, f64)>> {
    check_unit("omega", omega)?;
    let parts = integer_partitions(n)?;
    parts
        .into_par_iter()
        .map(|p| {
            let b = partition_bound(omega, &p)?.value;
            Ok((p, b))
        })
        .collect()
}

/// For each depth `d = 1..=n`, the best bound over partitions whose groups
/// all have at most `d` parties. Non-decreasing in `d`.
pub fn depth_bound_table(omega: f64, n: usize) -> Result<BTreeMap<usize, f64>> {
    check_cap(n)?;
    let bounds = all_partition_bounds(omega, n)?;
    Ok(depth_table_from(&bounds, n))
}

pub(crate) fn depth_table_from(bounds: &[(PartitionSpec, f64)], n: usize) -> BTreeMap<usize, f64> {
    (1..=n)
        .map(|d| {
            let best = bounds
                .iter()
                .filter(|(p, _)| p.max_group() <= d)
                .map(|(_, b)| *b)
                .fold(0.0, f64::max);
            (d, best)
        })
        .collect()
}
