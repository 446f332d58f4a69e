use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the real domain on which a function is defined.
    #[error("domain error in {func}: {msg}")]
    Domain { func: &'static str, msg: String },

    /// A numerical integral did not reach its requested tolerance.
    #[error("tolerance not met: best estimate {estimate:e}, achieved error {achieved:e}, requested {requested:e}")]
    ToleranceNotMet {
        estimate: f64,
        achieved: f64,
        requested: f64,
    },

    /// The requested quantity is infinite (e.g. zeroth moment of a surface with boundary cusps).
    #[error("divergent: {0}")]
    Divergent(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A surface model or geometric configuration violates its invariants.
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(func: &'static str, msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain {
        func,
        msg: msg.into(),
    })
}
