use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),
    /// The argument is valid but outside the range this implementation supports accurately.
    #[error("range error: {0}")]
    Range(String),
    /// A series, root finder or quadrature rule hit its iteration cap.
    #[error("convergence failure: {0}")]
    Convergence(String),
    /// The evaluation route loses too many digits to cancellation for these inputs.
    #[error("numeric instability: {0}")]
    NumericInstability(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Range(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::Error::Domain(format!($($arg)*)) };
}
pub(crate) use domain;
