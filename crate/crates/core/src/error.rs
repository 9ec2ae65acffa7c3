use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NonHermitian(f64),

    #[error("matrix has a negative eigenvalue {0:.3e}")]
    NegativeEigenvalue(f64),

    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("Kraus operators are not trace preserving (defect {0:.3e})")]
    NotCptp(f64),

    #[error("invalid probability: {0}")]
    BadProbability(String),

    #[error("amplitudes are not normalized: {0}")]
    BadNormalization(String),

    #[error("index out of range: {0}")]
    BadIndex(String),

    #[error("invalid Pauli letter {0:?} (expected one of I, X, Y, Z)")]
    BadLetter(char),

    #[error("division by zero: denominator {0:.3e}")]
    DivisionByZero(f64),

    #[error("control must be a pure state (purity {0:.12})")]
    MixedControl(f64),

    #[error("joint dimension {0} exceeds the supported maximum of {max}", max = crate::superposition::MAX_JOINT_DIM)]
    TooLarge(usize),

    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),

    #[error("scenario has no free vacuum amplitudes to optimize: {0}")]
    NoFreeAmplitudes(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
