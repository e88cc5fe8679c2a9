use thiserror::Error;

/// Errors raised by the library. The CLI maps them onto exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("amplitude vector has length {len}, expected 2^{n_parties} = {expected}")]
    StateLength {
        len: usize,
        n_parties: usize,
        expected: usize,
    },
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("tensor product of an empty list")]
    EmptyTensor,
    #[error("cannot mix states and operators in one tensor product")]
    MixedTensorKinds,
    #[error("invalid party set: {0}")]
    InvalidParties(String),
    #[error("invalid permutation: {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("measurement elements invalid: {0}")]
    InvalidMeasurement(String),
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: String,
    },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("n = {n} exceeds the enumeration cap of {cap} parties")]
    TooManyParties { n: usize, cap: usize },
    #[error("energy split is inconsistent: prod(1 - w_j) = {product}, expected {expected}")]
    EnergyProduct { product: f64, expected: f64 },
    #[error(
        "observed success probability {observed} exceeds the entangled bound {bound} at omega = {omega}, n = {n}"
    )]
    InconsistentObservation {
        n: usize,
        omega: f64,
        observed: f64,
        bound: f64,
    },
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            range: format!("[{lo}, {hi}]"),
        })
    }
}

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
    check_range(name, value, 0.0, 1.0)
}
