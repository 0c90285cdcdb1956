use num_bigint::BigInt;
use thiserror::Error;

use crate::complex::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("degree {degree} out of range 0..={top}")]
    DegreeOutOfRange { degree: i64, top: i64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("chain is not a cycle; its boundary is {}", fmt_vec(.boundary))]
    NotACycle { boundary: Vec<BigInt> },

    #[error("subcomplex is not closed under the boundary: {0}")]
    NotClosed(String),

    #[error("invalid chain map: {0}")]
    InvalidChainMap(String),

    #[error("incompatible coefficient moduli {0} and {1}")]
    IncompatibleModuli(u64, u64),

    #[error("cover condition violated: {0}")]
    Cover(String),

    #[error("formal expression mixes dimensions {0} and {1}")]
    MixedDimensions(u32, u32),

    #[error("unknown formal symbol `{0}`")]
    UnknownSymbol(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("complex failed validation: {0}")]
    Validation(Violation),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

fn fmt_vec(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}
