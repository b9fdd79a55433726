use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coefficients, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("degree-0 part vanishes; logarithm undefined")]
    VanishingUnit,

    #[error("operation requires nonzero rank")]
    ZeroRank,

    #[error("rank must be {0}")]
    Rank(&'static str),

    #[error("class is not strictly inside the Kähler cone (margin {margin:e})")]
    NotAmple { margin: f64 },

    #[error("record is not integral: {0}")]
    NotIntegral(String),

    #[error("first Chern class must vanish")]
    NonzeroC1,

    #[error("missing lift of c1 to the threefold")]
    MissingLift,

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("pairing of the two charges vanishes")]
    ZeroPairing,

    #[error("total central charge vanishes")]
    ZeroCentralCharge,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown name {0:?}")]
    Unknown(String),
}

pub type Result<T> = std::result::Result<T, Error>;
