use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("{what} exceeds cap {cap} (reached {reached})")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        reached: usize,
    },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not coprime to the conductor {1}")]
    NotCoprime(u64, u64),
    #[error("conductor {0} does not divide {1}")]
    NotDivisible(u64, u64),
    #[error("eigenvalues of x do not all lie in Q(zeta_{conductor}): {detail}")]
    EigenvaluesOutsideCyclotomic { conductor: u64, detail: String },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
