use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix dimension {0} exceeds the 16x16 (4-qubit) limit")]
    DimensionOverflow(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("qubit index {index} out of range for a {qubits}-qubit register")]
    QubitIndex { index: usize, qubits: usize },

    #[error("unsupported register size: {0} qubits")]
    UnsupportedRegister(usize),

    #[error("matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("{name} = {value} is outside its domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("empty grid")]
    EmptyGrid,

    #[error("unknown figure id {0}")]
    UnknownFigure(u32),

    #[error("unknown objective '{0}' (expected n+, n-, nave, f+, f-, fave or ndep)")]
    UnknownObjective(String),
}

impl Error {
    pub(crate) fn out_of_domain(name: &'static str, value: f64, domain: &'static str) -> Self {
        Error::OutOfDomain { name, value, domain }
    }
}

/// Checks `value ∈ [0, 1]`.
pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::out_of_domain(name, value, "[0, 1]"))
    }
}
