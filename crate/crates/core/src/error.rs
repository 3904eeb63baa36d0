use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Out-of-range or inconsistent input.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// Input exceeds the size an exact method can handle.
    #[error("size error: {0}")]
    Size(String),
    /// A numerical routine failed to reach its tolerance.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// A theorem hypothesis required by the operation does not hold.
    #[error("hypothesis violation: {0}")]
    Hypothesis(String),
    /// A caller-supplied callback broke its contract.
    #[error("contract violation: {0}")]
    Contract(String),
}

impl Error {
    pub(crate) fn size(msg: impl Into<String>) -> Self {
        Error::Size(msg.into())
    }
}

/// Returns a parameter error unless `cond` holds.
macro_rules! ensure_param {
    ($cond:expr, $($arg:tt)+) => {{
        // negated so that NaN fails the check
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        let failed = !$cond;
        if failed {
            return Err($crate::error::Error::Parameter(format!($($arg)+)));
        }
    }};
}
pub(crate) use ensure_param;
