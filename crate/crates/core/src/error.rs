use thiserror::Error;

/// Errors raised by the exact and Monte Carlo engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible weights: {left} vs {right}")]
    IncompatibleWeights { left: usize, right: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("degree too large for enumeration: {degree} exceeds cap {cap}")]
    DegreeTooLarge { degree: usize, cap: usize },

    #[error("brickwork requires even degree, got {0}")]
    OddDegree(usize),

    #[error("Weingarten undefined below degree: N = {n} < {degree}")]
    WeingartenBelowDegree { n: usize, degree: usize },

    #[error("outside validity window: degree {degree} exceeds N = {n}")]
    OutsideValidityWindow { degree: usize, n: usize },

    #[error("partition length {length} exceeds matrix size {n}")]
    LengthExceedsSize { length: usize, n: usize },

    #[error("non-square matrix: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("too many pairings for Wick enumeration: {pairings} exceeds cap {cap}")]
    PairingCapExceeded { pairings: u128, cap: u128 },

    #[error("no consistent calibration:\n{0}")]
    NoConsistentCalibration(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Coarse classification used to map errors onto process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Limit,
    Calibration,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::DegreeTooLarge { .. } | Error::OutsideValidityWindow { .. } | Error::PairingCapExceeded { .. } => {
                ErrorKind::Limit
            }
            Error::NoConsistentCalibration(_) => ErrorKind::Calibration,
            _ => ErrorKind::Validation,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
