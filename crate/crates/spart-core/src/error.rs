use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parity: {0}")]
    Parity(String),
    #[error("pole at evaluation point {0}")]
    Pole(String),
    #[error("non-simple pole at {0}")]
    NonSimplePole(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("function is not of the form (A - B x) with A nonzero: {0}")]
    Degenerate(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("invalid boundary: {0}")]
    InvalidBoundary(String),
    #[error("unstable product: {0}")]
    Unstable(String),
    #[error("ill-defined action: {0}")]
    IllDefined(String),
    #[error("character formula: {0}")]
    Formula(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
