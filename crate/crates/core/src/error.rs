use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    NonPrimeCharacteristic(u32),
    ReducibleModulus(Vec<u32>),
    DegreeMismatch { expected: usize, found: usize },
    DependentBasis,
    EnumerationCapExceeded { requested: u128, cap: u64 },
    AmbientMismatch { left: usize, right: usize },
    DependentInput,
    RankDeficientGenerator { rank: usize, rows: usize },
    DegenerateCode,
    SingularMatrix,
    ZeroMessage,
    NoIntegralSolution { q: u32, m: u32 },
    UnsupportedDimension(&'static str),
    InvalidParameters(String),
    DependentPoints,
    LengthExceedsDegree { n: usize, m: usize },
    DegreeTooSmall(u32),
    NotASystem,
    NotHyperplaneScattered,
    ExtensionTooLarge { r: usize, max: usize },
    UnknownExample(String),
    ArityMismatch { form: u8, expected: usize, found: usize },
    ZeroExtension,
    DimensionMismatch { expected: usize, found: usize },
    InvalidRange { start: u64, end: u64, total: u64 },
    EmptyDescendantSet,
    CrossCheckFailed(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPrimeCharacteristic(q) => write!(f, "characteristic {q} is not a prime"),
            Error::ReducibleModulus(p) => write!(f, "modulus {p:?} is reducible"),
            Error::DegreeMismatch { expected, found } => {
                write!(f, "expected a monic polynomial of degree {expected}, found degree {found}")
            }
            Error::DependentBasis => write!(f, "basis elements are linearly dependent over the prime field"),
            Error::EnumerationCapExceeded { requested, cap } => {
                write!(f, "enumeration of {requested} items exceeds the cap of {cap}")
            }
            Error::AmbientMismatch { left, right } => {
                write!(f, "ambient dimensions differ ({left} vs {right})")
            }
            Error::DependentInput => write!(f, "input vectors are linearly dependent"),
            Error::RankDeficientGenerator { rank, rows } => {
                write!(f, "generator matrix has rank {rank} but {rows} rows")
            }
            Error::DegenerateCode => write!(f, "code is degenerate"),
            Error::SingularMatrix => write!(f, "matrix is singular"),
            Error::ZeroMessage => write!(f, "message vector is zero"),
            Error::NoIntegralSolution { q, m } => {
                write!(f, "weight partition system has no integral solution for q={q}, m={m}")
            }
            Error::UnsupportedDimension(why) => write!(f, "unsupported dimension: {why}"),
            Error::InvalidParameters(why) => write!(f, "invalid parameters: {why}"),
            Error::DependentPoints => write!(f, "evaluation points are linearly dependent over the prime field"),
            Error::LengthExceedsDegree { n, m } => {
                write!(f, "length {n} exceeds the extension degree {m}")
            }
            Error::DegreeTooSmall(h) => write!(f, "extension degree {h} is too small (need at least 3)"),
            Error::NotASystem => write!(f, "vectors do not span the ambient space over the extension field"),
            Error::NotHyperplaneScattered => write!(f, "system is not scattered with respect to hyperplanes"),
            Error::ExtensionTooLarge { r, max } => {
                write!(f, "extension by {r} vectors exceeds the guaranteed maximum {max} (m - 2k + 1)")
            }
            Error::UnknownExample(id) => write!(f, "unknown example id {id:?}"),
            Error::ArityMismatch { form, expected, found } => {
                write!(f, "form {form} takes {expected} parameters, got {found}")
            }
            Error::ZeroExtension => write!(f, "extension vector is zero"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "expected dimension {expected}, found {found}")
            }
            Error::InvalidRange { start, end, total } => {
                write!(f, "range {start}..{end} is not within 0..{total}")
            }
            Error::EmptyDescendantSet => write!(f, "descendants of the empty set are undefined"),
            Error::CrossCheckFailed(what) => write!(f, "independent cross-check disagreed: {what}"),
        }
    }
}

impl core::error::Error for Error {}
