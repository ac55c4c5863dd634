use thiserror::Error;

/// Errors produced by the simulator and the analytic engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Register or vector sizes that do not line up.
    #[error("size error: {0}")]
    Size(String),

    #[error("index {index} out of range for {len} {what}")]
    Index {
        index: usize,
        len: usize,
        what: &'static str,
    },

    #[error("value error: {0}")]
    Value(String),

    /// State is not normalized within tolerance.
    #[error("state error: squared norm {norm_sqr} deviates from 1")]
    State { norm_sqr: f64 },

    /// Exact enumeration requested beyond the supported size; use Monte Carlo instead.
    #[error("capacity exceeded: {what} is {size}, limit is {limit}; use Monte Carlo estimation instead")]
    Capacity {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("invalid scheme: {0}")]
    Scheme(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_index(index: usize, len: usize, what: &'static str) -> Result<()> {
    if index < len {
        Ok(())
    } else {
        Err(Error::Index { index, len, what })
    }
}
