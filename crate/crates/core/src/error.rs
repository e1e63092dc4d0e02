use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cyclotomic context mismatch: Q(z_{0}) vs Q(z_{1})")]
    ContextMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("not of finite type: {0}")]
    NotFiniteType(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("atlas incomplete: {0}")]
    IncompleteAtlas(String),
    #[error("no recipe for root {0}")]
    RecipeMissing(String),
    #[error("linear system has no solution: {0}")]
    Unsolvable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
