//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state is not normalized: |norm^2 - 1| = {0:.3e}")]
    NotNormalized(f64),

    #[error("transmissivity {0} outside [0, 1]")]
    BadTransmissivity(f64),

    #[error("invalid input state: {0}")]
    InvalidInput(String),

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("control and target qubits must be distinct (got {0})")]
    DuplicateQubit(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state leaves the bosonic-symmetric subspace: residual norm {0:.3e}")]
    NotSymmetric(f64),

    #[error("bitstring length {0} is odd; expected one pair of bits per photon")]
    OddBitstring(usize),

    #[error("bitstring contains non-binary character {0:?}")]
    BadBitstring(char),

    #[error("synthesis target has no nonzero basis terms")]
    EmptyTarget,

    #[error("grid of {got} points cannot resolve a trigonometric polynomial of degree {degree}; need at least {needed}")]
    GridTooSmall {
        got: usize,
        degree: usize,
        needed: usize,
    },

    #[error("posterior underflow: likelihood product vanished on the whole grid")]
    PosteriorUnderflow,

    #[error("eigendecomposition failed to converge")]
    EigenFailed,

    #[error("invalid configuration: {0}")]
    BadConfig(String),

    #[error("cannot parse circuit text at line {line}: {reason}")]
    CircuitParse { line: usize, reason: String },
}
