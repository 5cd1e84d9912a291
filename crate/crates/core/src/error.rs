use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(
        "unsupported field order {0}: supported are primes up to 64 and 4, 8, 9, 16, 25, 27, 32, 49, 64"
    )]
    UnsupportedField(u64),

    #[error("{0}")]
    Domain(String),

    #[error("multiplicity exceeds q+1: m = {m} > {max}, the maximal multiplicity for pool size {q}")]
    DesignBound { q: u32, m: u32, max: u32 },

    #[error("undefined: {0}")]
    Undefined(&'static str),

    #[error("not applicable: {0}")]
    NotApplicable(&'static str),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("infeasible: required multiplicity exceeds cap {cap} (raw bound {raw_bound})")]
    Infeasible { raw_bound: f64, cap: u32 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: u64, column: u64, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code: 1 for domain-level outcomes (infeasible, not
    /// applicable, undefined), 2 for invalid input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Undefined(_)
            | Error::NotApplicable(_)
            | Error::NoSolution(_)
            | Error::Infeasible { .. } => 1,
            Error::UnsupportedField(_)
            | Error::Domain(_)
            | Error::DesignBound { .. }
            | Error::Parse { .. }
            | Error::Io(_) => 2,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
