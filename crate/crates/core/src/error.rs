use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity error: {what} has size {size}, limit is {limit}")]
    Capacity {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("convergence error after {iterations} iterations: {detail}")]
    Convergence { iterations: usize, detail: String },

    #[error("propagation error at t = {time}: {detail}")]
    Propagation { time: f64, detail: String },

    /// Truncated bases did not converge to the requested accuracy.
    #[error("accuracy error: {0}")]
    Accuracy(String),

    #[error("diagnostic error: {0}")]
    Diagnostic(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by invalid input rather than numerical trouble.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Capacity { .. })
    }
}
