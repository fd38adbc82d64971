use thiserror::Error;

/// Errors raised by field, matrix, frame and search operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is not irreducible over F_{p}")]
    ReducibleModulus { p: u64 },
    #[error("modulus must be monic of degree {m}")]
    BadModulus { m: u32 },
    #[error("no Conway polynomial available for F_{p}^{m}")]
    NoConwayAvailable { p: u64, m: u32 },
    #[error("field of order {p}^{m} is too large")]
    FieldTooLarge { p: u64, m: u32 },
    #[error("element is not a primitive element")]
    NotPrimitive,
    #[error("field has no order-2 automorphism (odd extension degree)")]
    NoConjugation,
    #[error("element is not fixed by the conjugation")]
    NotInFixedField,
    #[error("{n} does not divide q+1 = {q_plus_one}")]
    OrderDoesNotDivide { n: u64, q_plus_one: u64 },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operation requires the other geometry (case {0})")]
    CaseMismatch(&'static str),
    #[error("span is degenerate")]
    DegenerateSpan,
    #[error("discriminants differ")]
    DiscriminantMismatch,
    #[error("enumeration of {size} vectors exceeds cap {cap}")]
    EnumerationTooLarge { size: u128, cap: u128 },
    #[error("matrix is not self-adjoint")]
    NotSelfAdjoint,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("rank {rank} does not match target dimension {dim}")]
    RankMismatch { rank: usize, dim: usize },
    #[error("frame constant is zero")]
    ZeroFrameConstant,
    #[error("frame is not tight")]
    NotTight,
    #[error("factor is not a Hadamard matrix")]
    NotHadamard,
    #[error("fiducial vector is zero")]
    ZeroFiducial,
    #[error("Zauner fiducials need odd m, got {0}")]
    EvenM(u32),
    #[error("unknown exemplar {0:?}")]
    UnknownExemplar(String),
    #[error("frame constant vanishes under the projection")]
    FrameConstantVanishes,
    #[error("entry outside {{0}} u T_3")]
    BadEntryDomain,
    #[error("matrix is not a tight-frame Gram matrix over the cyclotomic ring")]
    NotTightGram,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        }
    }
}
