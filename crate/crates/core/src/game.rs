//! Exact Born-rule evaluation of the distributed discrimination game.
//!
//! Party `i` measures its qubit and succeeds when its outcome equals `x_i`;
//! the figure of merit is the probability that every party succeeds,
//! averaged over the `2^n` equiprobable messages.

use std::collections::BTreeMap;

use crate::constructions::{bipartite_state, plus_measurement, MessageVector};
use crate::error::{check_unit, Error, Result};
use crate::qcore::{apply_local, tensor_ops, BinaryMeasurement, HermitianOp, PureState};

/// A state handed to the parties for one message.
#[derive(Debug, Clone, PartialEq)]
pub enum Preparation {
    Pure(PureState),
    Mixed(HermitianOp),
}

impl Preparation {
    fn dim(&self) -> usize {
        match self {
            Preparation::Pure(s) => s.dim(),
            Preparation::Mixed(rho) => rho.dim(),
        }
    }

    pub fn density(&self) -> HermitianOp {
        match self {
            Preparation::Pure(s) => s.density(),
            Preparation::Mixed(rho) => rho.clone(),
        }
    }
}

/// States for every message plus one qubit measurement per party.
#[derive(Debug, Clone, PartialEq)]
pub struct Strategy {
    n: usize,
    states: Vec<Preparation>,
    measurements: Vec<BinaryMeasurement>,
}

impl Strategy {
    /// `states[i]` is the preparation for [`MessageVector::from_index`]`(n, i)`.
    pub fn new(n: usize, states: Vec<Preparation>, measurements: Vec<BinaryMeasurement>) -> Result<Self> {
        if n == 0 || n > 16 {
            return Err(Error::InvalidStrategy(format!("unsupported party count {n}")));
        }
        if states.len() != 1 << n {
            return Err(Error::InvalidStrategy(format!(
                "{} states for {} messages",
                states.len(),
                1usize << n
            )));
        }
        if measurements.len() != n {
            return Err(Error::InvalidStrategy(format!(
                "{} measurements for {n} parties",
                measurements.len()
            )));
        }
        if let Some(s) = states.iter().find(|s| s.dim() != 1 << n) {
            return Err(Error::Dimension(format!(
                "state of dimension {} on {n} qubits",
                s.dim()
            )));
        }
        if let Some(m) = measurements.iter().find(|m| m.dim() != 2) {
            return Err(Error::Dimension(format!("measurement of dimension {}", m.dim())));
        }
        Ok(Self {
            n,
            states,
            measurements,
        })
    }

    pub fn from_map(
        n: usize,
        mut states: BTreeMap<MessageVector, Preparation>,
        measurements: Vec<BinaryMeasurement>,
    ) -> Result<Self> {
        let ordered = MessageVector::all(n)
            .map(|m| {
                states
                    .remove(&m)
                    .ok_or_else(|| Error::InvalidStrategy(format!("missing state for {:?}", m.bits())))
            })
            .collect::<Result<Vec<_>>>()?;
        if !states.is_empty() {
            return Err(Error::InvalidStrategy("states for unknown messages".into()));
        }
        Self::new(n, ordered, measurements)
    }

    /// Pure states from a constructor, one measurement per party.
    pub fn pure(
        n: usize,
        mut prepare: impl FnMut(&MessageVector) -> Result<PureState>,
        measurements: Vec<BinaryMeasurement>,
    ) -> Result<Self> {
        let states = MessageVector::all(n)
            .map(|m| prepare(&m).map(Preparation::Pure))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, states, measurements)
    }

    /// Every party measures `|+>/|->`.
    pub fn with_plus_measurements(
        n: usize,
        prepare: impl FnMut(&MessageVector) -> Result<PureState>,
    ) -> Result<Self> {
        Self::pure(n, prepare, vec![plus_measurement(); n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn states(&self) -> &[Preparation] {
        &self.states
    }

    pub fn measurements(&self) -> &[BinaryMeasurement] {
        &self.measurements
    }

    /// Probability that every party guesses its bit for message `msg_index`.
    pub fn message_success(&self, msg_index: usize) -> f64 {
        let msg = MessageVector::from_index(self.n, msg_index);
        match &self.states[msg_index] {
            Preparation::Pure(s) => {
                let mut amps = s.amplitudes().to_vec();
                for (party, &bit) in msg.bits().iter().enumerate() {
                    apply_local(&mut amps, self.n, party, self.measurements[party].element(bit));
                }
                s.amplitudes()
                    .iter()
                    .zip(&amps)
                    .map(|(a, b)| (a.conj() * b).re)
                    .sum()
            }
            Preparation::Mixed(rho) => {
                let effect = self.joint_effect(&msg);
                rho.trace_product(&effect)
            }
        }
    }

    fn joint_effect(&self, msg: &MessageVector) -> HermitianOp {
        let factors: Vec<HermitianOp> = msg
            .bits()
            .iter()
            .zip(&self.measurements)
            .map(|(&b, m)| m.element(b).clone())
            .collect();
        tensor_ops(&factors).expect("n >= 1")
    }
}

/// Average success probability `2^-n sum_x Tr[rho_x (M^0_{x_0} (x) ... )]`.
pub fn born_success(strategy: &Strategy) -> f64 {
    let total: f64 = (0..strategy.states.len())
        .map(|i| strategy.message_success(i))
        .sum();
    total / strategy.states.len() as f64
}

/// Depolarizing noise `rho -> nu rho + (1 - nu) 1 / 2^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    visibility: f64,
}

impl NoiseModel {
    pub fn new(visibility: f64) -> Result<Self> {
        check_unit("visibility", visibility)?;
        Ok(Self { visibility })
    }

    pub fn visibility(&self) -> f64 {
        self.visibility
    }

    /// The mixed state `nu rho + (1 - nu) 1 / d`.
    pub fn apply(&self, prep: &Preparation) -> HermitianOp {
        let rho = prep.density();
        let d = rho.dim();
        let noise = HermitianOp::identity(d).scaled((1.0 - self.visibility) / d as f64);
        rho.scaled(self.visibility).plus(&noise).expect("same dimension")
    }
}

/// Success probability after depolarizing every preparation.
///
/// Pure strategies use linearity: `nu Tr[rho M] + (1 - nu) Tr[M] / 2^n` per
/// message, with `Tr[M]` the product of local traces (valid for any POVM).
/// Strategies holding mixed states are mixed explicitly.
pub fn noisy_success(strategy: &Strategy, noise: NoiseModel) -> f64 {
    let pure = strategy
        .states
        .iter()
        .all(|s| matches!(s, Preparation::Pure(_)));
    if pure {
        let nu = noise.visibility;
        let d = strategy.states.len() as f64;
        let total: f64 = (0..strategy.states.len())
            .map(|i| {
                let msg = MessageVector::from_index(strategy.n, i);
                let trace: f64 = msg
                    .bits()
                    .iter()
                    .zip(&strategy.measurements)
                    .map(|(&b, m)| m.element(b).trace())
                    .product();
                nu * strategy.message_success(i) + (1.0 - nu) * trace / d
            })
            .sum();
        total / d
    } else {
        born_success(&depolarized(strategy, noise))
    }
}

/// The same strategy with every preparation replaced by its depolarized
/// density operator.
pub fn depolarized(strategy: &Strategy, noise: NoiseModel) -> Strategy {
    Strategy {
        n: strategy.n,
        states: strategy
            .states
            .iter()
            .map(|s| Preparation::Mixed(noise.apply(s)))
            .collect(),
        measurements: strategy.measurements.clone(),
    }
}

/// Success of the two-party family at parameter `a` with `|+>/|->` measurements.
pub fn bipartite_success(omega: f64, a: f64) -> Result<f64> {
    let strategy = Strategy::with_plus_measurements(2, |m| bipartite_state(m, omega, a))?;
    Ok(born_success(&strategy))
}

const GOLDEN_WIDTH: f64 = 1e-9;

/// Maximizes [`bipartite_success`] over `a in [0, omega/2]` by a uniform grid
/// of `grid` points followed by golden-section refinement.
pub fn scan_a(omega: f64, grid: usize) -> Result<(f64, f64)> {
    check_unit("omega", omega)?;
    if grid < 3 {
        return Err(Error::OutOfRange {
            name: "grid",
            value: grid as f64,
            range: "[3, inf)".into(),
        });
    }
    let hi = omega / 2.0;
    let f = |a: f64| bipartite_success(omega, a.clamp(0.0, hi));
    if hi == 0.0 {
        return Ok((0.0, f(0.0)?));
    }
    let points: Vec<f64> = (0..grid).map(|i| hi * i as f64 / (grid - 1) as f64).collect();
    let values = points.iter().map(|&a| f(a)).collect::<Result<Vec<_>>>()?;
    let best = (0..grid)
        .max_by(|&i, &j| values[i].total_cmp(&values[j]))
        .expect("grid is non-empty");
    let (mut lo, mut up) = (points[best.saturating_sub(1)], points[(best + 1).min(grid - 1)]);

    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = up - ratio * (up - lo);
    let mut x2 = lo + ratio * (up - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while up - lo > GOLDEN_WIDTH {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (up - lo);
            f2 = f(x2)?;
        } else {
            up = x2;
            x2 = x1;
            f2 = f1;
            x1 = up - ratio * (up - lo);
            f1 = f(x1)?;
        }
    }
    let a_star = 0.5 * (lo + up);
    let p_star = f(a_star)?;
    if values[best] > p_star {
        Ok((points[best], values[best]))
    } else {
        Ok((a_star, p_star))
    }
}
