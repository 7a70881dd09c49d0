use thiserror::Error;

use crate::code::Family;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("symbol {0} is not in Z4")]
    InvalidSymbol(u32),
    #[error("bit value {0} is not in Z2")]
    InvalidBit(u32),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("index {index} does not fit in {bits} bits")]
    IndexOutOfRange { index: usize, bits: usize },
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("defining polynomial is not monic")]
    NonMonic,
    #[error("defining polynomial has degree {got}, expected {expected}")]
    WrongDegree { expected: usize, got: usize },
    #[error("Z has multiplicative order {order} modulo h(Z), expected {expected}")]
    BadPrimitiveOrder { order: usize, expected: usize },
    #[error("unknown code preset '{0}'")]
    UnknownPreset(String),

    #[error("operation requires a {expected:?} code, got {got:?}")]
    WrongFamily { expected: Family, got: Family },
    #[error("no systematic generator found for the dual code")]
    SystematicFormNotFound,

    #[error("non-finite likelihood at position {0}")]
    NonFinite(usize),
    #[error("{0} positions have a vanishing Fourier coefficient")]
    DegenerateInput(usize),
    #[error("codebook of {0} words is too large to enumerate")]
    CodebookTooLarge(usize),
    #[error("imaginary residue {residue:e} exceeds tolerance at position {position}")]
    ImaginaryResidue { position: usize, residue: f64 },
    #[error("channel labeling does not match decoder: {0}")]
    LabelingMismatch(&'static str),
    #[error("{patterns} test positions requested but the code has length {len}")]
    TooManyTestPositions { patterns: usize, len: usize },

    #[error("decoder '{decoder}' cannot decode code '{code}'")]
    IncompatibleDecoder { decoder: String, code: String },
    #[error("unknown decoder '{0}'")]
    UnknownDecoder(String),
    #[error("invalid stop rule: {0}")]
    InvalidStopRule(&'static str),
    #[error("Eb/N0 grid is empty")]
    EmptyGrid,
}
