use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid length: {0}")]
    InvalidLength(String),
    #[error("invalid child pair: left length {left}, right length {right}")]
    InvalidPair { left: usize, right: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid dimension: K = {k} exceeds N = {n}")]
    InvalidDimension { n: usize, k: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("profile format error: {0}")]
    Format(String),
}
