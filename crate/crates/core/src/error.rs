use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// `n(n+1)/4` is not an integer, so the product has no middle term.
    #[error("no middle term: n = {n} is congruent to {} mod 4, need 0 or 3", n % 4)]
    NoMiddleTerm { n: u64 },

    #[error("n = {n} is outside the supported range 1..={limit}")]
    OrderOutOfRange { n: u64, limit: u64 },

    #[error("index {index} is outside 0..={degree}")]
    IndexOutOfRange { index: u64, degree: u64 },

    #[error("unsupported precision: {bits} bits ({reason})")]
    UnsupportedPrecision { bits: u32, reason: &'static str },

    /// Generic precondition violation on a real-valued argument.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("format error on line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by the caller's arguments rather than by the environment.
    pub fn is_domain(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
