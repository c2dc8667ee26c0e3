use thiserror::Error;

/// Errors raised by samplers, solvers and diagnostics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported problem: {0}")]
    Unsupported(String),
    #[error("weight overflow on path {path} of stream (seed={seed}, stream={stream}): exponent {exponent}")]
    WeightOverflow {
        seed: u64,
        stream: u64,
        path: usize,
        exponent: f64,
    },
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("quadrature failure on panel {panel}: {reason}")]
    Quadrature { panel: usize, reason: String },
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg()))
    }
}
