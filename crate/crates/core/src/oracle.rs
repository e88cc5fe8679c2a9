//! Alternating (see-saw) optimization over energy-constrained pure states and
//! local qubit measurements.
//!
//! This is the independent check on the closed forms in [`crate::bounds`]: it
//! never uses them, only the Born rule and the vacuum constraint.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;

use crate::bounds::DEFAULT_SEED;
use crate::constructions::MessageVector;
use crate::error::{check_unit, Error, Result};
use crate::game::{Preparation, Strategy};
use crate::partition::PartitionSpec;
use crate::qcore::{
    apply_local, norm_sqr, partial_trace, qubits_for_dim, tensor_ops, BinaryMeasurement,
    HermitianOp, PureState, C64, C_ONE, C_ZERO,
};

/// Largest party count the see-saw accepts.
pub const MAX_SEESAW_PARTIES: usize = 4;

// lower end of the shift lambda - a_max; c_k / d^2 stays finite down here
const SHIFT_FLOOR: f64 = 1e-100;
const SECULAR_ITERS: usize = 160;
const PAIR_GRID: usize = 13;
const HELSTROM_REL_THRESHOLD: f64 = 1e-14;

/// Maximizes `<phi|A|phi>` over unit `phi` with `|<0|phi>|^2 >= v`.
///
/// Stationary points satisfy `phi ∝ (lambda - A)^{-1} |0>` for a shift
/// `lambda > a_max`; in the eigenbasis of `A` the vacuum weight is
/// `w = S1^2 / S2` with `S_p = sum_k c_k / (lambda - a_k)^p`, which increases
/// monotonically from its limit at `a_max` to 1. One eigendecomposition serves
/// every `v`.
pub(crate) struct ConstrainedMaximizer {
    values: Vec<f64>,
    vectors: Vec<Vec<C64>>,
    // z_k = <e_k|0>
    z: Vec<C64>,
    c: Vec<f64>,
    top: f64,
    is_top: Vec<bool>,
    c_top: f64,
    scale: f64,
}

impl ConstrainedMaximizer {
    pub(crate) fn new(op: &HermitianOp) -> Self {
        let eig = op.eigh();
        let top = *eig.values.last().expect("dimension is positive");
        let scale = eig
            .values
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        let is_top: Vec<bool> = eig
            .values
            .iter()
            .map(|&a| top - a <= 1e-12 * scale)
            .collect();
        let z: Vec<C64> = eig.vectors.iter().map(|e| e[0].conj()).collect();
        let c: Vec<f64> = z.iter().map(|zk| zk.norm_sqr()).collect();
        let c_top = c.iter().zip(&is_top).filter(|(_, &t)| t).map(|(c, _)| c).sum();
        Self {
            values: eig.values,
            vectors: eig.vectors,
            z,
            c,
            top,
            is_top,
            c_top,
            scale,
        }
    }

    fn dim(&self) -> usize {
        self.values.len()
    }

    // (vacuum weight, value, d w / d ln d) of the stationary vector at shift
    // d = lambda - a_max
    fn secular(&self, d: f64, skip_top: bool) -> (f64, f64, f64) {
        let (mut s1, mut s2, mut s3, mut sa) = (0.0, 0.0, 0.0, 0.0);
        for k in 0..self.dim() {
            if skip_top && self.is_top[k] {
                continue;
            }
            let dk = d + (self.top - self.values[k]);
            let inv = 1.0 / dk;
            let t1 = self.c[k] * inv;
            let t2 = t1 * inv;
            s1 += t1;
            s2 += t2;
            s3 += t2 * inv;
            sa += t2 * self.values[k];
        }
        if s2 == 0.0 {
            return (0.0, self.top, 0.0);
        }
        let slope = d * 2.0 * s1 * (s1 * s3 - s2 * s2) / (s2 * s2);
        (s1 * s1 / s2, sa / s2, slope)
    }

    fn vector_at(&self, d: f64, skip_top: bool) -> Vec<C64> {
        let mut out = vec![C_ZERO; self.dim()];
        for k in 0..self.dim() {
            if skip_top && self.is_top[k] {
                continue;
            }
            let coef = self.z[k] / (d + (self.top - self.values[k]));
            for (o, e) in out.iter_mut().zip(&self.vectors[k]) {
                *o += coef * e;
            }
        }
        normalize(out)
    }

    fn top_projection_of_vacuum(&self) -> Vec<C64> {
        let mut out = vec![C_ZERO; self.dim()];
        for k in (0..self.dim()).filter(|&k| self.is_top[k]) {
            for (o, e) in out.iter_mut().zip(&self.vectors[k]) {
                *o += self.z[k] * e;
            }
        }
        normalize(out)
    }

    // a top eigenvector with the least vacuum overlap
    fn dark_top_vector(&self) -> Vec<C64> {
        let k = (0..self.dim())
            .filter(|&k| self.is_top[k])
            .min_by(|&i, &j| self.c[i].total_cmp(&self.c[j]))
            .expect("top eigenspace is non-empty");
        self.vectors[k].clone()
    }

    fn vacuum_value(&self) -> f64 {
        self.c.iter().zip(&self.values).map(|(c, a)| c * a).sum()
    }

    /// Optimal value, and the optimizer when `want_vector` is set.
    pub(crate) fn solve(&self, v: f64, want_vector: bool) -> (f64, Option<Vec<C64>>) {
        if v >= 1.0 {
            return (self.vacuum_value(), want_vector.then(|| basis0(self.dim())));
        }
        if self.c_top > 0.0 && v <= self.c_top {
            return (self.top, want_vector.then(|| self.top_projection_of_vacuum()));
        }
        if v <= 0.0 {
            return (self.top, want_vector.then(|| self.dark_top_vector()));
        }

        let (w_lo, _, _) = self.secular(SHIFT_FLOOR, false);
        if w_lo >= v {
            // |0> is (numerically) orthogonal to the top eigenspace: mix the
            // limiting stationary vector with a top eigenvector
            let (w_lim, v_lim, _) = self.secular(SHIFT_FLOOR, true);
            let alpha2 = (v / w_lim).min(1.0);
            let value = alpha2 * v_lim + (1.0 - alpha2) * self.top;
            let vector = want_vector.then(|| {
                let lim = self.vector_at(SHIFT_FLOOR, true);
                let dark = self.dark_top_vector();
                let (a, b) = (alpha2.sqrt(), (1.0 - alpha2).sqrt());
                normalize(lim.iter().zip(&dark).map(|(x, y)| a * x + b * y).collect())
            });
            return (value, vector);
        }

        let mut hi = self.scale;
        while self.secular(hi, false).0 < v {
            hi *= 2.0;
            if hi > 1e300 {
                return (self.vacuum_value(), want_vector.then(|| basis0(self.dim())));
            }
        }
        // safeguarded Newton on ln d, keeping a bracket with w(hi) >= v
        let (mut lo_u, mut hi_u) = (SHIFT_FLOOR.ln(), hi.ln());
        let mut u = hi_u;
        let (mut w, _, mut slope) = self.secular(hi, false);
        for _ in 0..SECULAR_ITERS {
            if hi_u - lo_u <= 1e-13 * hi_u.abs().max(1.0) || (w >= v && w - v <= 1e-15) {
                break;
            }
            let newton = u - (w - v) / slope;
            u = if slope > 0.0 && newton > lo_u && newton < hi_u {
                newton
            } else {
                0.5 * (lo_u + hi_u)
            };
            (w, _, slope) = self.secular(u.exp(), false);
            if w >= v {
                hi_u = u;
            } else {
                lo_u = u;
            }
        }
        // the upper end is feasible
        let d = hi_u.exp();
        let (_, value, _) = self.secular(d, false);
        (value, want_vector.then(|| self.vector_at(d, false)))
    }
}

fn basis0(dim: usize) -> Vec<C64> {
    let mut v = vec![C_ZERO; dim];
    v[0] = C_ONE;
    v
}

fn normalize(mut v: Vec<C64>) -> Vec<C64> {
    let norm = norm_sqr(&v).sqrt();
    for x in &mut v {
        *x /= norm;
    }
    v
}

fn rayleigh(op: &HermitianOp, v: &[C64]) -> f64 {
    op.expectation(v)
}

/// Best state for a fixed score operator under vacuum weight `>= 1 - omega`.
pub fn optimal_state_given_measurements(score_op: &HermitianOp, omega: f64) -> Result<PureState> {
    check_unit("omega", omega)?;
    let n = qubits_for_dim(score_op.dim()).ok_or_else(|| {
        Error::Dimension(format!("score operator dimension {} is not 2^n", score_op.dim()))
    })?;
    let (_, vector) = ConstrainedMaximizer::new(score_op).solve(1.0 - omega, true);
    PureState::normalized(n, vector.expect("vector requested"))
}

/// Helstrom step: `element0` projects onto the strictly positive eigenspace of
/// `effective0 - effective1`, the kernel goes to `element1`.
pub fn optimal_measurement_given_states(
    effective: (&HermitianOp, &HermitianOp),
) -> Result<BinaryMeasurement> {
    let (e0, e1) = effective;
    let diff = e0.minus(e1)?;
    let scale = e0
        .entries()
        .iter()
        .chain(e1.entries())
        .fold(0.0f64, |m, x| m.max(x.norm()));
    BinaryMeasurement::from_element0(diff.positive_projector(HELSTROM_REL_THRESHOLD * scale))
}

#[derive(Debug, Clone)]
pub struct SeesawConfig {
    pub n: usize,
    pub omega: f64,
    /// Which groups of parties may share entanglement.
    pub structure: PartitionSpec,
    pub restarts: usize,
    pub max_iters: usize,
    /// Stop once an iteration improves the value by less than `tol` relative.
    pub tol: f64,
    pub seed: u64,
}

impl SeesawConfig {
    pub fn new(omega: f64, structure: PartitionSpec) -> Self {
        Self {
            n: structure.n(),
            omega,
            structure,
            restarts: 8,
            max_iters: 2000,
            tol: 1e-12,
            seed: DEFAULT_SEED,
        }
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        check_unit("omega", self.omega)?;
        if self.n == 0 || self.n > MAX_SEESAW_PARTIES {
            return Err(Error::InvalidConfig(format!(
                "see-saw supports 1..={MAX_SEESAW_PARTIES} parties, got {}",
                self.n
            )));
        }
        if self.structure.n() != self.n {
            return Err(Error::InvalidConfig(format!(
                "structure {} does not cover {} parties",
                self.structure, self.n
            )));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SeesawReport {
    pub best_value: f64,
    pub per_restart_values: Vec<f64>,
    /// Every restart stopped on the tolerance rather than `max_iters`.
    pub converged: bool,
    /// Largest iteration count over restarts.
    pub iterations_used: usize,
    /// Objective after initialization and after every iteration of the best restart.
    pub history: Vec<f64>,
    pub best_strategy: Strategy,
    /// Largest `(1 - omega) - |<0|psi>|^2` over all state iterates.
    pub max_vacuum_deficit: f64,
    /// Largest deviation of `element0 + element1` from the identity over all measurement iterates.
    pub max_povm_deviation: f64,
}

impl SeesawReport {
    /// Largest mismatch between the single-party reduction of party `i` for
    /// message `x` and that of party `j` for `x` with bits `i` and `j` swapped.
    ///
    /// Compares populations and off-diagonal magnitudes, which local phase
    /// rotations leave alone.
    pub fn reduced_state_asymmetry(&self) -> f64 {
        let n = self.best_strategy.n();
        let reductions: Vec<Vec<HermitianOp>> = self
            .best_strategy
            .states()
            .iter()
            .map(|s| {
                let rho = s.density();
                (0..n)
                    .map(|i| partial_trace(&rho, n, &[i]).expect("valid party"))
                    .collect()
            })
            .collect();
        let mut worst = 0.0f64;
        for x in 0..1usize << n {
            let bits = MessageVector::from_index(n, x).bits().to_vec();
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut swapped = bits.clone();
                    swapped.swap(i, j);
                    let y = MessageVector::new(swapped).expect("bits").index();
                    let (a, b) = (&reductions[x][i], &reductions[y][j]);
                    worst = worst
                        .max((a.get(0, 0).re - b.get(0, 0).re).abs())
                        .max((a.get(0, 1).norm() - b.get(0, 1).norm()).abs());
                }
            }
        }
        worst
    }
}

struct Iterate {
    n: usize,
    groups: Vec<Range<usize>>,
    // states[x][j]: group j's vector for message x
    states: Vec<Vec<Vec<C64>>>,
    measurements: Vec<BinaryMeasurement>,
}

struct RestartOutcome {
    value: f64,
    history: Vec<f64>,
    converged: bool,
    iterations: usize,
    iterate: Iterate,
    vacuum_deficit: f64,
    povm_deviation: f64,
}

fn kron_vectors(parts: &[Vec<C64>]) -> Vec<C64> {
    parts.iter().skip(1).fold(parts[0].clone(), |acc, p| {
        acc.iter()
            .flat_map(|a| p.iter().map(move |b| a * b))
            .collect()
    })
}

fn random_qubit_projector(rng: &mut ChaCha8Rng) -> BinaryMeasurement {
    let v: Vec<C64> = (0..2)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    BinaryMeasurement::from_element0(HermitianOp::projector(&normalize(v)))
        .expect("rank-one projector")
}

// vacuum amplitude sqrt(v), the rest random
fn random_group_state(rng: &mut ChaCha8Rng, dim: usize, v: f64) -> Vec<C64> {
    let mut tail: Vec<C64> = (1..dim)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = norm_sqr(&tail).sqrt();
    let r = (1.0 - v).max(0.0).sqrt();
    for t in &mut tail {
        *t *= r / norm;
    }
    let mut out = Vec::with_capacity(dim);
    out.push(C64::new(v.sqrt(), 0.0));
    out.extend(tail);
    out
}

impl Iterate {
    fn random(config: &SeesawConfig, rng: &mut ChaCha8Rng) -> Self {
        let n = config.n;
        let groups = config.structure.party_ranges();
        let total = -(-config.omega).ln_1p();
        let states = (0..1usize << n)
            .map(|_| {
                let raw: Vec<f64> = groups.iter().map(|_| rng.sample::<f64, _>(Exp1)).collect();
                let sum: f64 = raw.iter().sum();
                groups
                    .iter()
                    .zip(&raw)
                    .map(|(g, r)| {
                        // without a budget any vacuum weight is feasible; a
                        // zero weight would leave the Helstrom step nothing to see
                        let v = if total.is_finite() {
                            (-total * r / sum).exp()
                        } else {
                            rng.random::<f64>()
                        };
                        random_group_state(rng, 1 << g.len(), v)
                    })
                    .collect()
            })
            .collect();
        let measurements = (0..n).map(|_| random_qubit_projector(rng)).collect();
        Self {
            n,
            groups,
            states,
            measurements,
        }
    }

    fn full_state(&self, x: usize) -> Vec<C64> {
        kron_vectors(&self.states[x])
    }

    fn message_value(&self, x: usize, psi: &[C64]) -> f64 {
        let msg = MessageVector::from_index(self.n, x);
        let mut phi = psi.to_vec();
        for (party, &b) in msg.bits().iter().enumerate() {
            apply_local(&mut phi, self.n, party, self.measurements[party].element(b));
        }
        psi.iter().zip(&phi).map(|(a, b)| (a.conj() * b).re).sum()
    }

    fn value(&self) -> f64 {
        let total: f64 = (0..self.states.len())
            .map(|x| self.message_value(x, &self.full_state(x)))
            .sum();
        total / self.states.len() as f64
    }

    fn vacuum_deficit(&self, omega: f64) -> f64 {
        self.states
            .iter()
            .map(|groups| {
                let w: f64 = groups.iter().map(|g| g[0].norm_sqr()).product();
                (1.0 - omega) - w
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    // E_b = sum_{x: x_i = b} Tr_{not i}[(1 (x) X) |psi_x><psi_x|]
    fn measurement_step(&mut self, party: usize) -> f64 {
        let n = self.n;
        let stride = 1usize << (n - 1 - party);
        let mut effective = [[C_ZERO; 4], [C_ZERO; 4]];
        for x in 0..self.states.len() {
            let msg = MessageVector::from_index(n, x);
            let psi = self.full_state(x);
            let mut chi = psi.clone();
            for (k, &b) in msg.bits().iter().enumerate() {
                if k != party {
                    apply_local(&mut chi, n, k, self.measurements[k].element(b));
                }
            }
            let e = &mut effective[msg.bits()[party] as usize];
            for r in (0..psi.len()).filter(|r| r & stride == 0) {
                let idx = [r, r | stride];
                for a in 0..2 {
                    for b in 0..2 {
                        e[2 * a + b] += chi[idx[a]] * psi[idx[b]].conj();
                    }
                }
            }
        }
        let [e0, e1] = effective.map(|e| HermitianOp::hermitian_part(2, e.to_vec()));
        let m = optimal_measurement_given_states((&e0, &e1)).expect("2x2 Hermitian pair");
        let dev = m
            .element0()
            .plus(m.element1())
            .expect("same dimension")
            .max_abs_diff(&HermitianOp::identity(2));
        self.measurements[party] = m;
        dev
    }

    fn group_op(&self, x: usize, group: &Range<usize>) -> HermitianOp {
        let msg = MessageVector::from_index(self.n, x);
        let factors: Vec<HermitianOp> = group
            .clone()
            .map(|i| self.measurements[i].element(msg.bits()[i]).clone())
            .collect();
        tensor_ops(&factors).expect("non-empty group")
    }

    fn state_step(&mut self, omega: f64) {
        let total = -(-omega).ln_1p();
        for x in 0..self.states.len() {
            let ops: Vec<HermitianOp> = self.groups.iter().map(|g| self.group_op(x, g)).collect();
            let current: f64 = ops
                .iter()
                .zip(&self.states[x])
                .map(|(op, s)| rayleigh(op, s))
                .product();
            let solvers: Vec<ConstrainedMaximizer> = ops.iter().map(ConstrainedMaximizer::new).collect();
            let shares = if total.is_finite() {
                allocate(&solvers, &self.states[x], total)
            } else {
                vec![f64::INFINITY; solvers.len()]
            };
            let candidate: Vec<Vec<C64>> = solvers
                .iter()
                .zip(&shares)
                .map(|(s, &t)| s.solve((-t).exp(), true).1.expect("vector requested"))
                .collect();
            let value: f64 = ops.iter().zip(&candidate).map(|(op, s)| rayleigh(op, s)).product();
            if value >= current {
                self.states[x] = candidate;
            }
        }
    }

    fn into_strategy(self) -> Strategy {
        let states = (0..self.states.len())
            .map(|x| {
                PureState::normalized(self.n, self.full_state(x))
                    .map(Preparation::Pure)
                    .expect("product of unit vectors")
            })
            .collect();
        Strategy::new(self.n, states, self.measurements).expect("consistent shapes")
    }
}

// Log-vacuum shares t_j = -ln w_j with sum t_j = total: start from the
// current weights, then improve pairwise by a grid plus golden-section search.
fn allocate(solvers: &[ConstrainedMaximizer], current: &[Vec<C64>], total: f64) -> Vec<f64> {
    let m = solvers.len();
    let mut t: Vec<f64> = current
        .iter()
        .map(|s| (-s[0].norm_sqr().max(f64::MIN_POSITIVE).ln()).max(0.0))
        .collect();
    if m == 1 {
        return vec![total];
    }
    let slack = total - t.iter().sum::<f64>();
    if slack >= 0.0 {
        t.iter_mut().for_each(|x| *x += slack / m as f64);
    } else {
        let sum: f64 = t.iter().sum();
        t.iter_mut().for_each(|x| *x *= total / sum);
    }
    let f = |j: usize, tj: f64| solvers[j].solve((-tj).exp(), false).0;
    for _sweep in 0..2 {
        for a in 0..m {
            for b in (a + 1)..m {
                let budget = t[a] + t[b];
                if budget <= 0.0 {
                    continue;
                }
                let g = |s: f64| f(a, s) * f(b, budget - s);
                let now = g(t[a]);
                let (s, val) = maximize_on_interval(g, budget);
                if val > now {
                    t[a] = s;
                    t[b] = budget - s;
                }
            }
        }
    }
    t
}

fn maximize_on_interval(g: impl Fn(f64) -> f64, width: f64) -> (f64, f64) {
    let points: Vec<f64> = (0..PAIR_GRID)
        .map(|i| width * i as f64 / (PAIR_GRID - 1) as f64)
        .collect();
    let values: Vec<f64> = points.iter().map(|&s| g(s)).collect();
    let best = (0..PAIR_GRID)
        .max_by(|&i, &j| values[i].total_cmp(&values[j]))
        .expect("grid is non-empty");
    let (mut lo, mut hi) = (points[best.saturating_sub(1)], points[(best + 1).min(PAIR_GRID - 1)]);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    let mut best_pair = (points[best], values[best]);
    for _ in 0..80 {
        if hi - lo <= 1e-7 * width {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = g(x1);
        }
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > best_pair.1 {
            best_pair = (x, v);
        }
    }
    best_pair
}

fn run_restart(config: &SeesawConfig, restart: usize) -> RestartOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(restart as u64);
    let mut it = Iterate::random(config, &mut rng);
    let mut value = it.value();
    let mut history = vec![value];
    let mut vacuum_deficit = it.vacuum_deficit(config.omega);
    let mut povm_deviation = 0.0f64;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iters {
        iterations += 1;
        for party in 0..config.n {
            povm_deviation = povm_deviation.max(it.measurement_step(party));
        }
        it.state_step(config.omega);
        vacuum_deficit = vacuum_deficit.max(it.vacuum_deficit(config.omega));
        let next = it.value();
        history.push(next);
        let gain = next - value;
        value = next.max(value);
        if gain <= config.tol * value.abs().max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
    }
    RestartOutcome {
        value,
        history,
        converged,
        iterations,
        iterate: it,
        vacuum_deficit,
        povm_deviation,
    }
}

/// Runs independent restarts (in parallel) and reports the best.
///
/// Each restart draws from the master seed on its own stream, so the report
/// does not depend on scheduling.
pub fn seesaw(config: &SeesawConfig) -> Result<SeesawReport> {
    config.validate()?;
    let outcomes: Vec<RestartOutcome> = (0..config.restarts)
        .into_par_iter()
        .map(|r| run_restart(config, r))
        .collect();
    let per_restart_values: Vec<f64> = outcomes.iter().map(|o| o.value).collect();
    let converged = outcomes.iter().all(|o| o.converged);
    let iterations_used = outcomes.iter().map(|o| o.iterations).max().unwrap_or(0);
    let max_vacuum_deficit = outcomes
        .iter()
        .map(|o| o.vacuum_deficit)
        .fold(f64::NEG_INFINITY, f64::max);
    let max_povm_deviation = outcomes.iter().map(|o| o.povm_deviation).fold(0.0, f64::max);
    let best = outcomes
        .into_iter()
        .reduce(|a, b| if b.value > a.value { b } else { a })
        .expect("at least one restart");
    Ok(SeesawReport {
        best_value: best.value,
        per_restart_values,
        converged,
        iterations_used,
        history: best.history,
        best_strategy: best.iterate.into_strategy(),
        max_vacuum_deficit,
        max_povm_deviation,
    })
}
