use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("invalid root bracket: {0}")]
    InvalidBracket(String),
    #[error("determinant index k = {k} outside the valid range {min}..={max}")]
    IndexOutOfRange { k: usize, min: usize, max: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid spectrum request: {0}")]
    InvalidRequest(String),
    #[error("unsupported derivative order {0} (expected 0..=3)")]
    UnsupportedOrder(u32),
    #[error("node count not certified at current precision: {0}")]
    NodePrecision(String),
}
