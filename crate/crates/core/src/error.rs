use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes under specialization {0}")]
    SingularSpecialization(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("mixed-parity operand in supercommutator")]
    MixedParity,
    #[error("sector mismatch: expected {expected}, found {found}")]
    SectorMismatch { expected: String, found: String },
    #[error("index {index2}/2 is not admissible for {kind} in sector {sector}")]
    BadIndex { kind: String, index2: i64, sector: String },
    #[error("central element C is not in the domain of this map")]
    CentralInput,
    #[error("invalid module specification: {0}")]
    InvalidSpec(String),
    #[error("token {token} does not belong to the {family} family")]
    ForeignToken { token: String, family: String },
    #[error("singular normalizer b(1-2b) for b = {0}")]
    SingularNormalizer(String),
    #[error("operation requires b = 0, got b = {0}")]
    RequiresBZero(String),
    #[error("invalid construction: {0}")]
    InvalidConstruction(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
