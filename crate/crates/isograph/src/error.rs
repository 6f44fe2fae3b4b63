//! Error type shared across the crate, with stable process exit codes for the CLI.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in F_p^2")]
    DivisionByZero,
    #[error("modular polynomial for ell = {0} is not vendored")]
    UnsupportedPrime(u64),
    #[error("torsion field extension of degree {0} exceeds the supported bound {1}")]
    TorsionExtensionTooLarge(usize, usize),
    #[error("polynomial is not a valid kernel polynomial: {0}")]
    InvalidKernel(String),
    #[error("resultant degenerates; subgroup is not coprime to the kernel")]
    DegenerateImage,
    #[error("cannot renormalise codomain to the requested model")]
    NormalizationFailed,
    #[error("j-invariant {0} has extra automorphisms; twist is not unique")]
    ExtraAutomorphism(String),
    #[error("graph file format error at line {line}: {msg}")]
    FormatError { line: usize, msg: String },
    #[error("operation requires p = 1 mod 12, but p = {0}")]
    UnsupportedCharacteristic(u64),
    #[error("degree vector exponent must be >= 1 for prime {0}")]
    InvalidExponent(u64),
    #[error("invalid discriminant: {0}")]
    InvalidDiscriminant(i64),
    #[error("degree is not squarefree: prime {0} repeats")]
    NonSquarefreeDegree(u64),
    #[error("no edge of degree {ell} from j = {from} to j = {to}")]
    NoSuchEdge { ell: u64, from: String, to: String },
    #[error("branch index {given} out of range; {available} parallel edges exist")]
    BranchOutOfRange { given: usize, available: usize },
    #[error("isogeny chaining mismatch: {0}")]
    ModelMismatch(String),
    #[error("isogeny degrees are not coprime")]
    NotCoprime,
    #[error("walk is not closed")]
    NotClosed,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("cut side is empty")]
    EmptySide,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI; one code per error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) => 2,
            Error::DivisionByZero => 3,
            Error::UnsupportedPrime(_) => 4,
            Error::TorsionExtensionTooLarge(..) => 5,
            Error::InvalidKernel(_) => 6,
            Error::DegenerateImage => 7,
            Error::NormalizationFailed => 8,
            Error::ExtraAutomorphism(_) => 9,
            Error::FormatError { .. } => 10,
            Error::UnsupportedCharacteristic(_) => 11,
            Error::InvalidExponent(_) => 12,
            Error::InvalidDiscriminant(_) => 13,
            Error::NonSquarefreeDegree(_) => 14,
            Error::NoSuchEdge { .. } => 15,
            Error::BranchOutOfRange { .. } => 16,
            Error::ModelMismatch(_) => 17,
            Error::NotCoprime => 18,
            Error::NotClosed => 19,
            Error::NotSymmetric => 20,
            Error::EmptySide => 21,
            Error::Disconnected => 22,
            Error::Overflow(_) => 23,
            Error::Io(_) => 24,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
