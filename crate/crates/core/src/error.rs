use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} supports at most {max} qubits, got {n}")]
    SizeGuard { what: &'static str, n: usize, max: usize },
    #[error("length mismatch: expected {expected} symbols, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid Pauli symbol {0:?}")]
    InvalidSymbol(char),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("invalid stabilizer tableau: {0}")]
    InvalidTableau(String),
    #[error("sample set contains no runs")]
    EmptySamples,
    #[error("prefix of length {0} is already a full Pauli string")]
    PrefixFull(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn param(message: impl Into<String>) -> Self {
        Error::InvalidParameter(message.into())
    }
}
