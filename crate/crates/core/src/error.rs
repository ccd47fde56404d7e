use std::fmt;

/// Error type shared by all kernels and solvers.
///
/// `Overflow` marks any finite computation that would leave the signed
/// 64-bit range; arithmetic never wraps silently. `Domain` marks inputs
/// outside an operation's contract (bad ranges, malformed certificates,
/// infinity combinations with no defined result).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    Overflow(&'static str),
    Domain(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Overflow(what) => write!(f, "arithmetic overflow in {what}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
