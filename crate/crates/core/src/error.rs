use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates a documented precondition.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The requested window length exceeds the exact-analysis state cap.
    #[error(
        "window length L={requested} exceeds the exact-analysis cap of {cap} \
         (2^{requested} states); use a Monte Carlo estimate instead or raise the cap"
    )]
    Capacity { requested: usize, cap: usize },

    #[error("operation requires {expected} memory")]
    WrongMemory { expected: &'static str },

    /// An iterative solver stopped before reaching its tolerance.
    #[error("{solver} did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged {
        solver: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("singular system in {0}")]
    Singular(&'static str),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("invalid coupling pair: {0}")]
    InvalidCoupling(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
