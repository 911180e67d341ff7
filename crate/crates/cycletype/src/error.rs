use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// Domain errors name the violated condition so callers (in particular the
/// CLI) can surface it verbatim instead of panicking.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// A theorem bound was requested outside its hypotheses.
    #[error("hypothesis violation in {bound}: {condition}")]
    Hypothesis { bound: String, condition: String },

    /// An exact computation would enumerate more cycle types than allowed.
    #[error("degree {requested} exceeds the exact enumeration cap {cap} (cost grows like the partition count)")]
    CapExceeded { requested: usize, cap: usize },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn hypothesis(bound: impl Into<String>, condition: impl Into<String>) -> Self {
        Error::Hypothesis {
            bound: bound.into(),
            condition: condition.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
