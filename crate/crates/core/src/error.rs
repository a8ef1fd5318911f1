use thiserror::Error;

use crate::complex::CellId;

/// Errors raised by the topocluster library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("chain references unknown cell {0}")]
    UnknownCell(CellId),
    #[error("cell {id} has dimension {found}, expected {expected}")]
    WrongDimension { id: CellId, expected: u8, found: u8 },
    #[error("boundary of a {0}-chain is undefined")]
    NoBoundary(u8),
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("chains have different dimensions ({0} vs {1})")]
    DimensionMismatch(u8, u8),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid lattice specification: {0}")]
    InvalidSpec(String),
    #[error("qubit of cell {0} has been removed")]
    RemovedQubit(CellId),
    #[error("operator acts on {found} qubits, expected {expected}")]
    QubitCountMismatch { expected: usize, found: usize },
    #[error("qubit {0} out of range")]
    InvalidQubit(usize),
    #[error("product has imaginary phase")]
    ImaginaryPhase,
    #[error("cannot parse Pauli string: {0}")]
    PauliParse(String),
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("malformed syndrome: {0}")]
    MalformedSyndrome(String),
    #[error("odd number of flagged volumes ({0}) in a complex without boundary")]
    OddDefectParity(usize),
    #[error("decoder {decoder} cannot run on lattice {lattice}")]
    DecoderMismatch { decoder: String, lattice: String },
    #[error("{0} qubits exceeds the limit of {1}")]
    TooManyQubits(usize, usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("state format: {0}")]
    StateFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
