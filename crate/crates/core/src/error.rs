use alloc::string::String;
use core::fmt;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the supported range.
    Domain(String),
    /// A geometric object failed validation.
    Geometry(String),
    /// A root search could not find a sign change in its bracket.
    Bracket(String),
    /// A factorization broke down (matrix not positive definite).
    Factorization(String),
    /// An iterative method stopped before meeting its tolerance.
    NoConvergence(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Geometry(m) => write!(f, "invalid geometry: {m}"),
            Error::Bracket(m) => write!(f, "bracket not found: {m}"),
            Error::Factorization(m) => write!(f, "factorization failed: {m}"),
            Error::NoConvergence(m) => write!(f, "no convergence: {m}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
