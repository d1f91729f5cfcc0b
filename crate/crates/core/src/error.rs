use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at offset {offset}: {msg}")]
    Parse { offset: usize, msg: String },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("{0}: zero polynomial not allowed")]
    ZeroInput(&'static str),

    #[error("{0}: constant polynomial not allowed")]
    ConstantInput(&'static str),

    #[error("0^0 is undefined")]
    ZeroToZero,

    #[error("{op}: {poly} is not irreducible")]
    Reducible { op: &'static str, poly: String },

    #[error("{op}: {poly} is even (has a root in GF(2))")]
    EvenInput { op: &'static str, poly: String },

    #[error("{0} is not perfect")]
    NotPerfect(String),

    #[error("too many distinct prime factors ({count}, limit {limit})")]
    TooManyFactors { count: usize, limit: usize },

    #[error("exponent tuple out of domain: {0}")]
    OutOfDomain(String),

    #[error("unknown multiplication kernel `{0}`")]
    UnknownKernel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
