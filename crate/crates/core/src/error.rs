use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported regime: {0}")]
    Unsupported(String),
    #[error("divergent series: p = {p} must be > 1")]
    Divergence { p: f64 },
    #[error("shape mismatch: expected {expected} values, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("time {time} is outside the horizon [0, {horizon})")]
    Horizon { time: f64, horizon: f64 },
    #[error("tridiagonal solver failed: {0}")]
    Solver(String),
    #[error("non-finite state in {what} at t = {time}")]
    NonFinite { what: &'static str, time: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Shape { expected, got })
    }
}
