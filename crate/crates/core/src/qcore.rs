//! Dense complex linear algebra on n-qubit tensor-product spaces.
//!
//! Party 0 is the most significant bit of a computational-basis index. Every
//! module in the crate shares this convention, so `|01>` is index 1 and
//! `|10>` is index 2.
//!
//! Matrices are small (at most `2^n x 2^n` with `n` around a dozen) and are
//! stored row-major in plain `Vec`s. Hermitian eigendecomposition uses cyclic
//! complex Jacobi rotations.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance for normalization, Hermiticity and identity checks.
pub const ATOL_UNIT: f64 = 1e-12;
/// Tolerance for eigen residuals and positivity checks.
pub const ATOL_EIG: f64 = 1e-10;

pub(crate) const C_ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const C_ONE: C64 = C64::new(1.0, 0.0);

/// Returns `k` when `dim == 2^k`.
pub fn qubits_for_dim(dim: usize) -> Option<usize> {
    if dim.is_power_of_two() {
        Some(dim.trailing_zeros() as usize)
    } else {
        None
    }
}

/// Bit of `party` in basis index `index` for an `n`-party register.
#[inline]
pub fn party_bit(index: usize, n_parties: usize, party: usize) -> usize {
    (index >> (n_parties - 1 - party)) & 1
}

/// A normalized amplitude vector over `n_parties` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_parties: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(n_parties: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_length(n_parties, amplitudes.len())?;
        let norm = norm_sqr(&amplitudes);
        if (norm - 1.0).abs() > ATOL_UNIT {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            n_parties,
            amplitudes,
        })
    }

    pub fn from_real(n_parties: usize, amplitudes: &[f64]) -> Result<Self> {
        Self::new(
            n_parties,
            amplitudes.iter().map(|&a| C64::new(a, 0.0)).collect(),
        )
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(n_parties: usize, mut amplitudes: Vec<C64>) -> Result<Self> {
        check_length(n_parties, amplitudes.len())?;
        let norm = norm_sqr(&amplitudes).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self {
            n_parties,
            amplitudes,
        })
    }

    pub fn basis(n_parties: usize, index: usize) -> Self {
        let mut amplitudes = vec![C_ZERO; 1 << n_parties];
        amplitudes[index] = C_ONE;
        Self {
            n_parties,
            amplitudes,
        }
    }

    /// The all-zero state `|0...0>`.
    pub fn vacuum(n_parties: usize) -> Self {
        Self::basis(n_parties, 0)
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    /// `<self|other>`
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|<0...0|psi>|^2`
    pub fn vacuum_weight(&self) -> f64 {
        self.amplitudes[0].norm_sqr()
    }

    /// `Tr[H rho]` for the energy estimator `H = 1 - |0...0><0...0|`.
    pub fn energy(&self) -> f64 {
        1.0 - self.vacuum_weight()
    }

    pub fn density(&self) -> HermitianOp {
        HermitianOp::projector(&self.amplitudes)
    }

    pub fn expectation(&self, op: &HermitianOp) -> f64 {
        op.expectation(&self.amplitudes)
    }
}

fn check_length(n_parties: usize, len: usize) -> Result<()> {
    if n_parties == 0 || n_parties >= usize::BITS as usize || len != 1usize << n_parties {
        return Err(Error::StateLength {
            len,
            n_parties,
            expected: 1usize.checked_shl(n_parties as u32).unwrap_or(0),
        });
    }
    Ok(())
}

pub(crate) fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

/// A Hermitian matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOp {
    dim: usize,
    entries: Vec<C64>,
}

impl HermitianOp {
    /// Validates Hermiticity within [`ATOL_UNIT`] and stores the exact
    /// Hermitian part.
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "{} entries for a {dim}x{dim} operator",
                entries.len()
            )));
        }
        let mut dev: f64 = 0.0;
        for i in 0..dim {
            for j in i..dim {
                dev = dev.max((entries[i * dim + j] - entries[j * dim + i].conj()).norm());
            }
        }
        if !(dev <= ATOL_UNIT) {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self::hermitian_part(dim, entries))
    }

    pub(crate) fn hermitian_part(dim: usize, mut entries: Vec<C64>) -> Self {
        for i in 0..dim {
            entries[i * dim + i].im = 0.0;
            for j in (i + 1)..dim {
                let avg = (entries[i * dim + j] + entries[j * dim + i].conj()) * 0.5;
                entries[i * dim + j] = avg;
                entries[j * dim + i] = avg.conj();
            }
        }
        Self { dim, entries }
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    pub fn diag(values: &[f64]) -> Self {
        let dim = values.len();
        let mut entries = vec![C_ZERO; dim * dim];
        for (i, v) in values.iter().enumerate() {
            entries[i * dim + i] = C64::new(*v, 0.0);
        }
        Self { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![C_ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diag(&vec![1.0; dim])
    }

    /// `|v><v|` (no normalization applied).
    pub fn projector(v: &[C64]) -> Self {
        let dim = v.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in v {
            for b in v {
                entries.push(a * b.conj());
            }
        }
        Self::hermitian_part(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.dim + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i].re).sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn plus(&self, other: &HermitianOp) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn minus(&self, other: &HermitianOp) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &HermitianOp, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Dimension(format!("{} vs {}", self.dim, other.dim)));
        }
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &HermitianOp) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        debug_assert_eq!(v.len(), self.dim);
        self.entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `<v|A|v>`, real part.
    pub fn expectation(&self, v: &[C64]) -> f64 {
        let av = self.apply(v);
        v.iter().zip(&av).map(|(a, b)| (a.conj() * b).re).sum()
    }

    /// `Tr[self * other]` for two Hermitian operators.
    pub fn trace_product(&self, other: &HermitianOp) -> f64 {
        let d = self.dim;
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += (self.entries[i * d + j] * other.entries[j * d + i]).re;
            }
        }
        acc
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &HermitianOp) -> Self {
        let (da, db) = (self.dim, other.dim);
        let d = da * db;
        let mut entries = vec![C_ZERO; d * d];
        for i in 0..da {
            for j in 0..da {
                let a = self.entries[i * da + j];
                if a == C_ZERO {
                    continue;
                }
                for k in 0..db {
                    for l in 0..db {
                        entries[(i * db + k) * d + j * db + l] = a * other.entries[k * db + l];
                    }
                }
            }
        }
        Self { dim: d, entries }
    }

    /// Full eigendecomposition, eigenvalues ascending.
    pub fn eigh(&self) -> Eigen {
        jacobi_eigh(self)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigh().values[0]
    }

    /// Projector onto the span of eigenvectors with eigenvalue `> threshold`.
    pub fn positive_projector(&self, threshold: f64) -> Self {
        let eig = self.eigh();
        let mut out = vec![C_ZERO; self.dim * self.dim];
        for (val, vec) in eig.values.iter().zip(&eig.vectors) {
            if *val > threshold {
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        out[i * self.dim + j] += vec[i] * vec[j].conj();
                    }
                }
            }
        }
        Self::hermitian_part(self.dim, out)
    }
}

/// Eigenvalues in ascending order with matching unit eigenvectors.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<C64>>,
}

fn jacobi_eigh(op: &HermitianOp) -> Eigen {
    let n = op.dim;
    let mut a = op.entries.clone();
    let mut v = vec![C_ZERO; n * n];
    for i in 0..n {
        v[i * n + i] = C_ONE;
    }
    let scale: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if n > 1 && scale > 0.0 {
        for _sweep in 0..100 {
            let mut off = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a[p * n + q].norm_sqr();
                }
            }
            if off.sqrt() <= 1e-17 * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, n, p, q);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    Eigen {
        values: order.iter().map(|&i| diag[i]).collect(),
        vectors: order
            .iter()
            .map(|&k| (0..n).map(|i| v[i * n + k]).collect())
            .collect(),
    }
}

// Zeroes a[p][q] with U = diag(1, e^{-i phi}) * R(theta) acting on (p, q).
fn rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;
    // columns: A <- A U, V <- V U
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * c + akq * u_qp;
        a[k * n + q] = akp * s + akq * u_qq;
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * c + vkq * u_qp;
        v[k * n + q] = vkp * s + vkq * u_qq;
    }
    // rows: A <- U^dagger A
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk * c + aqk * u_qp.conj();
        a[q * n + k] = apk * s + aqk * u_qq.conj();
    }
    a[p * n + q] = C_ZERO;
    a[q * n + p] = C_ZERO;
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;
}

/// Largest eigenvalue and a unit eigenvector.
pub fn top_eigenpair(op: &HermitianOp) -> (f64, Vec<C64>) {
    let mut eig = op.eigh();
    let value = eig.values.pop().expect("dimension is positive");
    let vector = eig.vectors.pop().expect("dimension is positive");
    (value, vector)
}

/// Either side of a tensor product.
#[derive(Debug, Clone, PartialEq)]
pub enum TensorFactor {
    State(PureState),
    Op(HermitianOp),
}

/// Kronecker product of the factors in party order.
pub fn tensor(factors: &[TensorFactor]) -> Result<TensorFactor> {
    match factors.first() {
        None => Err(Error::EmptyTensor),
        Some(TensorFactor::State(_)) => {
            let states = factors
                .iter()
                .map(|f| match f {
                    TensorFactor::State(s) => Ok(s.clone()),
                    TensorFactor::Op(_) => Err(Error::MixedTensorKinds),
                })
                .collect::<Result<Vec<_>>>()?;
            tensor_states(&states).map(TensorFactor::State)
        }
        Some(TensorFactor::Op(_)) => {
            let ops = factors
                .iter()
                .map(|f| match f {
                    TensorFactor::Op(o) => Ok(o.clone()),
                    TensorFactor::State(_) => Err(Error::MixedTensorKinds),
                })
                .collect::<Result<Vec<_>>>()?;
            tensor_ops(&ops).map(TensorFactor::Op)
        }
    }
}

pub fn tensor_states(states: &[PureState]) -> Result<PureState> {
    let (first, rest) = states.split_first().ok_or(Error::EmptyTensor)?;
    let mut n = first.n_parties;
    let mut amps = first.amplitudes.clone();
    for s in rest {
        amps = amps
            .iter()
            .flat_map(|a| s.amplitudes.iter().map(move |b| a * b))
            .collect();
        n += s.n_parties;
    }
    check_length(n, amps.len())?;
    Ok(PureState {
        n_parties: n,
        amplitudes: amps,
    })
}

pub fn tensor_ops(ops: &[HermitianOp]) -> Result<HermitianOp> {
    let (first, rest) = ops.split_first().ok_or(Error::EmptyTensor)?;
    Ok(rest.iter().fold(first.clone(), |acc, o| acc.kron(o)))
}

fn check_party_set(n_parties: usize, parties: &[usize]) -> Result<Vec<usize>> {
    let mut sorted = parties.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != parties.len() {
        return Err(Error::InvalidParties(format!("duplicates in {parties:?}")));
    }
    if let Some(&p) = sorted.iter().find(|&&p| p >= n_parties) {
        return Err(Error::InvalidParties(format!(
            "party {p} out of range for n = {n_parties}"
        )));
    }
    Ok(sorted)
}

/// Reduced operator on the `keep` parties (returned in ascending party order).
pub fn partial_trace(op: &HermitianOp, n_parties: usize, keep: &[usize]) -> Result<HermitianOp> {
    if qubits_for_dim(op.dim) != Some(n_parties) {
        return Err(Error::Dimension(format!(
            "operator of dimension {} is not on {n_parties} qubits",
            op.dim
        )));
    }
    if keep.is_empty() {
        return Err(Error::InvalidParties("empty keep set".into()));
    }
    let keep = check_party_set(n_parties, keep)?;
    let traced: Vec<usize> = (0..n_parties).filter(|p| !keep.contains(p)).collect();
    let shift = |p: usize| n_parties - 1 - p;
    let embed = |kept_idx: usize, traced_idx: usize| -> usize {
        let mut full = 0;
        for (pos, &p) in keep.iter().enumerate() {
            full |= ((kept_idx >> (keep.len() - 1 - pos)) & 1) << shift(p);
        }
        for (pos, &p) in traced.iter().enumerate() {
            full |= ((traced_idx >> (traced.len() - 1 - pos)) & 1) << shift(p);
        }
        full
    };
    let dk = 1usize << keep.len();
    let dt = 1usize << traced.len();
    let mut out = vec![C_ZERO; dk * dk];
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = C_ZERO;
            for t in 0..dt {
                acc += op.get(embed(i, t), embed(j, t));
            }
            out[i * dk + j] = acc;
        }
    }
    Ok(HermitianOp::hermitian_part(dk, out))
}

/// Moves the factor of party `p` to position `perm[p]`.
pub fn permute_parties(state: &PureState, perm: &[usize]) -> Result<PureState> {
    let n = state.n_parties;
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::InvalidPermutation(perm.to_vec()));
    }
    let mut out = vec![C_ZERO; state.dim()];
    for (i, a) in state.amplitudes.iter().enumerate() {
        let mut j = 0;
        for (p, &target) in perm.iter().enumerate() {
            j |= party_bit(i, n, p) << (n - 1 - target);
        }
        out[j] = *a;
    }
    Ok(PureState {
        n_parties: n,
        amplitudes: out,
    })
}

/// Applies a one-qubit operator to `party` of an `n`-party amplitude vector.
pub(crate) fn apply_local(amps: &mut [C64], n_parties: usize, party: usize, op: &HermitianOp) {
    debug_assert_eq!(op.dim, 2);
    let stride = 1usize << (n_parties - 1 - party);
    let (m00, m01, m10, m11) = (op.entries[0], op.entries[1], op.entries[2], op.entries[3]);
    for i in 0..amps.len() {
        if i & stride == 0 {
            let a0 = amps[i];
            let a1 = amps[i | stride];
            amps[i] = m00 * a0 + m01 * a1;
            amps[i | stride] = m10 * a0 + m11 * a1;
        }
    }
}

/// A two-outcome measurement `{element0, element1}` on one space.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryMeasurement {
    element0: HermitianOp,
    element1: HermitianOp,
}

impl BinaryMeasurement {
    pub fn new(element0: HermitianOp, element1: HermitianOp) -> Result<Self> {
        let sum = element0.plus(&element1)?;
        let dev = sum.max_abs_diff(&HermitianOp::identity(sum.dim()));
        if dev > ATOL_UNIT {
            return Err(Error::InvalidMeasurement(format!(
                "elements sum to identity only within {dev:e}"
            )));
        }
        for (b, e) in [&element0, &element1].iter().enumerate() {
            let min = e.min_eigenvalue();
            if min < -ATOL_EIG {
                return Err(Error::InvalidMeasurement(format!(
                    "element{b} has eigenvalue {min:e}"
                )));
            }
        }
        Ok(Self { element0, element1 })
    }

    /// Completes `element0` with `element1 = 1 - element0`.
    pub fn from_element0(element0: HermitianOp) -> Result<Self> {
        let element1 = HermitianOp::identity(element0.dim()).minus(&element0)?;
        Self::new(element0, element1)
    }

    pub fn element(&self, outcome: u8) -> &HermitianOp {
        if outcome == 0 {
            &self.element0
        } else {
            &self.element1
        }
    }

    pub fn element0(&self) -> &HermitianOp {
        &self.element0
    }

    pub fn element1(&self) -> &HermitianOp {
        &self.element1
    }

    pub fn dim(&self) -> usize {
        self.element0.dim()
    }
}
