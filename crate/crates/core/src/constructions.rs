//! Explicit strategies that attain the bounds.
//!
//! All families use real amplitudes. The universal measurement is the
//! `|+>/|->` projective measurement on every party.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::bounds::{partition_bound, EnergyBound};
use crate::error::{check_unit, Error, Result};
use crate::partition::PartitionSpec;
use crate::qcore::{tensor_states, BinaryMeasurement, HermitianOp, PureState};

/// One bit per party; party 0 is the most significant bit of [`index`].
///
/// [`index`]: MessageVector::index
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MessageVector {
    bits: Vec<u8>,
}

impl MessageVector {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() || bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidConfig(format!("invalid message bits {bits:?}")));
        }
        Ok(Self { bits })
    }

    pub fn from_index(n: usize, index: usize) -> Self {
        Self {
            bits: (0..n).map(|i| ((index >> (n - 1 - i)) & 1) as u8).collect(),
        }
    }

    /// All `2^n` messages in index order.
    pub fn all(n: usize) -> impl Iterator<Item = MessageVector> {
        (0..1usize << n).map(move |i| Self::from_index(n, i))
    }

    pub fn index(&self) -> usize {
        self.bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Bits of the parties in `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> MessageVector {
        Self {
            bits: self.bits[range].to_vec(),
        }
    }

    // (-1)^{x . nu} for a basis index nu
    fn sign(&self, nu: usize) -> f64 {
        if (self.index() & nu).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// `sqrt(1 - omega)|0...0> + sum_{nu != 0} (-1)^{x.nu} sqrt(omega / (2^n - 1)) |nu>`
pub fn entangled_state(msg: &MessageVector, omega: f64) -> Result<PureState> {
    check_unit("omega", omega)?;
    let n = msg.len();
    let dim = 1usize << n;
    let mut amps = vec![0.0; dim];
    amps[0] = (1.0 - omega).sqrt();
    if dim > 1 {
        let c = (omega / (dim - 1) as f64).sqrt();
        for (nu, a) in amps.iter_mut().enumerate().skip(1) {
            *a = msg.sign(nu) * c;
        }
    }
    PureState::from_real(n, &amps)
}

/// Two-qubit family
/// `sqrt(1-w)|00> + (-1)^{x1} sqrt(a)|01> + (-1)^{x0} sqrt(a)|10> + (-1)^{x0+x1} sqrt(w-2a)|11>`.
pub fn bipartite_state(msg: &MessageVector, omega: f64, a: f64) -> Result<PureState> {
    check_unit("omega", omega)?;
    if msg.len() != 2 {
        return Err(Error::Dimension(format!(
            "bipartite family needs a 2-bit message, got {}",
            msg.len()
        )));
    }
    if !(a >= 0.0 && 2.0 * a <= omega * (1.0 + 1e-15)) {
        return Err(Error::OutOfRange {
            name: "a",
            value: a,
            range: format!("[0, {}]", omega / 2.0),
        });
    }
    let s0 = if msg.bits[0] == 0 { 1.0 } else { -1.0 };
    let s1 = if msg.bits[1] == 0 { 1.0 } else { -1.0 };
    let amps = [
        (1.0 - omega).sqrt(),
        s1 * a.sqrt(),
        s0 * a.sqrt(),
        s0 * s1 * (omega - 2.0 * a).max(0.0).sqrt(),
    ];
    PureState::from_real(2, &amps)
}

/// Per-party states `sqrt(v)|0> + (-1)^{x_i} sqrt(1 - v)|1>` with
/// `v = (1 - omega)^(1/n)`, so the product has vacuum weight `1 - omega`.
pub fn separable_states(msg: &MessageVector, omega: f64) -> Result<Vec<PureState>> {
    check_unit("omega", omega)?;
    let vac = (1.0 - omega).powf(1.0 / msg.len() as f64);
    msg.bits
        .iter()
        .map(|&b| {
            let sign = if b == 0 { 1.0 } else { -1.0 };
            PureState::from_real(1, &[vac.sqrt(), sign * (1.0 - vac).max(0.0).sqrt()])
        })
        .collect()
}

/// A partially separable preparation: group `j` of the partition receives
/// an entangled state with energy `energies[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategySpec {
    n: usize,
    omega: EnergyBound,
    partition: PartitionSpec,
    energies: Vec<f64>,
}

impl StrategySpec {
    pub fn new(omega: f64, partition: PartitionSpec, energies: Vec<f64>) -> Result<Self> {
        let omega = EnergyBound::new(omega)?;
        if energies.len() != partition.n_groups() {
            return Err(Error::Dimension(format!(
                "{} energies for {} groups",
                energies.len(),
                partition.n_groups()
            )));
        }
        for &e in &energies {
            check_unit("group energy", e)?;
        }
        let product: f64 = energies.iter().map(|e| 1.0 - e).product();
        let expected = 1.0 - omega.value();
        if (product - expected).abs() > 1e-9 {
            return Err(Error::EnergyProduct { product, expected });
        }
        Ok(Self {
            n: partition.n(),
            omega,
            partition,
            energies,
        })
    }

    /// Group energies taken from the partition-bound maximizer.
    pub fn optimal(omega: f64, partition: PartitionSpec) -> Result<Self> {
        let best = partition_bound(omega, &partition)?;
        Self::new(omega, partition, best.energies)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> f64 {
        self.omega.value()
    }

    pub fn partition(&self) -> &PartitionSpec {
        &self.partition
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }
}

/// Tensor product over groups of [`entangled_state`] on each group's bits.
/// Parties are ordered group by group.
pub fn hybrid_state(msg: &MessageVector, spec: &StrategySpec) -> Result<PureState> {
    if msg.len() != spec.n {
        return Err(Error::Dimension(format!(
            "message has {} bits, strategy has {} parties",
            msg.len(),
            spec.n
        )));
    }
    let factors = spec
        .partition
        .party_ranges()
        .into_iter()
        .zip(&spec.energies)
        .map(|(range, &e)| entangled_state(&msg.slice(range), e))
        .collect::<Result<Vec<_>>>()?;
    tensor_states(&factors)
}

/// `{|+><+|, |-><-|}`
pub fn plus_measurement() -> BinaryMeasurement {
    let h = FRAC_1_SQRT_2;
    let plus = PureState::from_real(1, &[h, h]).expect("normalized");
    let minus = PureState::from_real(1, &[h, -h]).expect("normalized");
    BinaryMeasurement::new(plus.density(), minus.density()).expect("valid measurement")
}

/// `H = 1 - |0...0><0...0|` on `n` parties.
pub fn energy_operator(n: usize) -> HermitianOp {
    let mut diag = vec![1.0; 1 << n];
    diag[0] = 0.0;
    HermitianOp::diag(&diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{partial_trace, permute_parties, top_eigenpair, C64};

    fn msg(bits: &[u8]) -> MessageVector {
        MessageVector::new(bits.to_vec()).unwrap()
    }

    fn assert_amps(s: &PureState, expected: &[f64], tol: f64) {
        assert_eq!(s.dim(), expected.len());
        for (a, e) in s.amplitudes().iter().zip(expected) {
            assert!((a - C64::new(*e, 0.0)).norm() < tol, "{a} vs {e}");
        }
    }

    #[test]
    fn message_indexing() {
        let m = msg(&[1, 0, 1]);
        assert_eq!(m.index(), 5);
        assert_eq!(MessageVector::from_index(3, 5), m);
        assert_eq!(MessageVector::all(2).count(), 4);
        assert!(MessageVector::new(vec![]).is_err());
        assert!(MessageVector::new(vec![2]).is_err());
    }

    #[test]
    fn entangled_two_party() {
        let s = entangled_state(&msg(&[0, 0]), 0.3).unwrap();
        let c = 0.1f64.sqrt();
        assert_amps(&s, &[0.7f64.sqrt(), c, c, c], 1e-15);
        for m in MessageVector::all(2) {
            let e = entangled_state(&m, 0.3).unwrap();
            let b = bipartite_state(&m, 0.3, 0.1).unwrap();
            assert_amps(&e, &b.amplitudes().iter().map(|a| a.re).collect::<Vec<_>>(), 1e-15);
        }
    }

    #[test]
    fn entangled_zero_energy_is_vacuum() {
        for m in MessageVector::all(3) {
            assert_eq!(entangled_state(&m, 0.0).unwrap(), PureState::vacuum(3));
        }
    }

    #[test]
    fn entangled_signs() {
        // x = (1,0,1), nu = |101>: x.nu = 1 + 0 + 1 = 2 -> +
        let s = entangled_state(&msg(&[1, 0, 1]), 0.4).unwrap();
        assert!(s.amplitudes()[0b101].re > 0.0);
        // nu = |100>: x.nu = 1 -> -
        assert!(s.amplitudes()[0b100].re < 0.0);
    }

    #[test]
    fn bipartite_family() {
        assert_eq!(bipartite_state(&msg(&[0, 0]), 0.0, 0.0).unwrap(), PureState::vacuum(2));
        let s = bipartite_state(&msg(&[1, 1]), 0.3, 0.1).unwrap();
        let c = 0.1f64.sqrt();
        assert_amps(&s, &[0.7f64.sqrt(), -c, -c, c], 1e-15);
        assert!(bipartite_state(&msg(&[0, 0]), 0.3, 0.2).is_err());
        assert!(bipartite_state(&msg(&[0, 0]), 0.3, -0.1).is_err());
        assert!(bipartite_state(&msg(&[0, 0, 0]), 0.3, 0.1).is_err());
    }

    #[test]
    fn separable_family() {
        for s in separable_states(&msg(&[0, 1, 1]), 0.0).unwrap() {
            assert_eq!(s, PureState::vacuum(1));
        }
        let h = 0.5f64.sqrt();
        let s = separable_states(&msg(&[0, 1]), 0.75).unwrap();
        assert_amps(&s[0], &[h, h], 1e-15);
        assert_amps(&s[1], &[h, -h], 1e-15);
        let s = separable_states(&msg(&[0, 0, 1]), 0.488).unwrap();
        for p in &s {
            assert!((p.vacuum_weight() - 0.8).abs() < 1e-12);
        }
    }

    #[test]
    fn hybrid_reductions() {
        let single = StrategySpec::new(0.4, PartitionSpec::full(3).unwrap(), vec![0.4]).unwrap();
        for m in MessageVector::all(3) {
            assert_eq!(hybrid_state(&m, &single).unwrap(), entangled_state(&m, 0.4).unwrap());
        }

        let n = 3;
        let w: f64 = 0.4;
        let e = 1.0 - (1.0 - w).powf(1.0 / n as f64);
        let spec = StrategySpec::new(w, PartitionSpec::singletons(n).unwrap(), vec![e; n]).unwrap();
        for m in MessageVector::all(n) {
            let h = hybrid_state(&m, &spec).unwrap();
            let t = tensor_states(&separable_states(&m, w).unwrap()).unwrap();
            assert_amps(&h, &t.amplitudes().iter().map(|a| a.re).collect::<Vec<_>>(), 1e-14);
        }

        let spec = StrategySpec::new(0.75, PartitionSpec::new(vec![2, 2]).unwrap(), vec![0.5, 0.5]).unwrap();
        let h = hybrid_state(&msg(&[0, 1, 1, 0]), &spec).unwrap();
        assert!((h.amplitudes()[0].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn strategy_spec_validation() {
        let p = PartitionSpec::new(vec![2, 2]).unwrap();
        assert!(matches!(
            StrategySpec::new(0.75, p.clone(), vec![0.5, 0.4]),
            Err(Error::EnergyProduct { .. })
        ));
        assert!(StrategySpec::new(0.75, p.clone(), vec![0.5]).is_err());
        let spec = StrategySpec::new(0.75, p, vec![0.5, 0.5]).unwrap();
        assert!(hybrid_state(&msg(&[0, 1]), &spec).is_err());
        let opt = StrategySpec::optimal(0.5, PartitionSpec::new(vec![3, 1]).unwrap()).unwrap();
        assert_eq!(opt.energies().len(), 2);
    }

    #[test]
    fn plus_measurement_elements() {
        let m = plus_measurement();
        let sum = m.element0().plus(m.element1()).unwrap();
        assert!(sum.max_abs_diff(&HermitianOp::identity(2)) < 1e-15);
        assert!((PureState::vacuum(1).expectation(m.element0()) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn helstrom_direction_is_plus_for_separable_pair() {
        for &w in &[0.1, 0.5, 0.75, 0.9] {
            let s0 = &separable_states(&msg(&[0]), w).unwrap()[0];
            let s1 = &separable_states(&msg(&[1]), w).unwrap()[0];
            let diff = s0.density().minus(&s1.density()).unwrap();
            let (val, v) = top_eigenpair(&diff);
            let vac = (1.0 - w) as f64;
            assert!((val - 2.0 * (vac * (1.0 - vac)).sqrt()).abs() < 1e-12);
            // |<+|v>| = 1
            let overlap = (v[0] + v[1]).norm() * FRAC_1_SQRT_2;
            assert!((overlap - 1.0).abs() < 1e-12);
            let projector = HermitianOp::projector(&v);
            assert!(projector.max_abs_diff(plus_measurement().element0()) < 1e-12);
        }
    }

    #[test]
    fn parity_operator_eigenvalues() {
        let (w, a) = (0.3, 0.1);
        let rho = |bits: &[u8]| bipartite_state(&msg(bits), w, a).unwrap().density();
        let op = rho(&[0, 0])
            .plus(&rho(&[1, 1]))
            .unwrap()
            .minus(&rho(&[0, 1]))
            .unwrap()
            .minus(&rho(&[1, 0]))
            .unwrap();
        let eig = op.eigh();
        // each of the four cross terms contributes once, hence the factor 4
        let expected = [4.0 * a, 4.0 * (w - 2.0 * a).sqrt() * (1.0 - w).sqrt()];
        for e in expected {
            assert!(eig.values.iter().any(|v| (v - e).abs() < 1e-12), "{e} not in {:?}", eig.values);
        }
        assert_eq!(eig.values.iter().filter(|v| **v > 1e-12).count(), 2);
    }

    #[test]
    fn energy_saturation() {
        let h3 = energy_operator(3);
        for m in MessageVector::all(3) {
            for &w in &[0.0, 0.2, 0.7, 1.0] {
                let e = entangled_state(&m, w).unwrap();
                assert!((e.expectation(&h3) - w).abs() < 1e-12);
                let t = tensor_states(&separable_states(&m, w).unwrap()).unwrap();
                assert!((t.expectation(&h3) - w).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn permutation_symmetry() {
        let w = 0.4;
        for m in [msg(&[0, 0, 0]), msg(&[1, 1, 1])] {
            let s = entangled_state(&m, w).unwrap();
            for perm in [[1, 2, 0], [0, 2, 1], [2, 1, 0]] {
                assert_eq!(permute_parties(&s, &perm).unwrap(), s);
            }
        }
        // jointly permuting parties and message bits
        let perm = [2, 0, 1];
        for m in MessageVector::all(3) {
            let mut bits = vec![0u8; 3];
            for (p, &t) in perm.iter().enumerate() {
                bits[t] = m.bits()[p];
            }
            let moved = permute_parties(&entangled_state(&m, w).unwrap(), &perm).unwrap();
            let direct = entangled_state(&msg(&bits), w).unwrap();
            assert_amps(&moved, &direct.amplitudes().iter().map(|a| a.re).collect::<Vec<_>>(), 1e-15);
        }
    }

    #[test]
    fn equal_reduced_states() {
        // swapping parties i and j maps rho_x to rho_{x with bits i, j swapped},
        // so reductions agree outright for permutation-invariant messages
        for n in 2..=4 {
            for m in MessageVector::all(n) {
                let rho = entangled_state(&m, 0.3).unwrap().density();
                for i in 0..n {
                    for j in (i + 1)..n {
                        let mut bits = m.bits().to_vec();
                        bits.swap(i, j);
                        let swapped = entangled_state(&msg(&bits), 0.3).unwrap().density();
                        let ri = partial_trace(&rho, n, &[i]).unwrap();
                        let rj = partial_trace(&swapped, n, &[j]).unwrap();
                        assert!(ri.max_abs_diff(&rj) < 1e-12);
                        if m.bits()[i] == m.bits()[j] {
                            let rj = partial_trace(&rho, n, &[j]).unwrap();
                            assert!(ri.max_abs_diff(&rj) < 1e-12);
                        }
                    }
                }
            }
        }
        for bits in [[0u8, 0], [1, 1]] {
            let rho = bipartite_state(&msg(&bits), 0.3, 0.1).unwrap().density();
            let a = partial_trace(&rho, 2, &[0]).unwrap();
            let b = partial_trace(&rho, 2, &[1]).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-12);
        }
    }
}
