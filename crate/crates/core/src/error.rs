use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("modulus {0} is below the minimum of 10 required for a zero window")]
    ModulusTooSmall(usize),

    #[error("system is not underdetermined: {rows} rows, {cols} columns")]
    NotUnderdetermined { rows: usize, cols: usize },

    #[error("no null vector met the residual bound {bound:e}; best residual {best:e}")]
    ConditioningExhausted { best: f64, bound: f64 },

    #[error("invalid window [{lo}, {hi}]")]
    InvalidWindow { lo: String, hi: String },

    #[error("{0}")]
    NotRepresentable(String),

    #[error("overlay parts do not share a common window")]
    WindowMismatch,

    #[error("truncation would produce about {estimate} atoms (limit {limit})")]
    TooManyAtoms { estimate: u64, limit: u64 },

    #[error(
        "Gaussian tail bound {tail:e} exceeds 10% of the pairing scale {scale:e}; window too small"
    )]
    WindowTooSmall { tail: f64, scale: f64 },

    #[error("positions must be pairwise distinct")]
    NotDistinct,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
